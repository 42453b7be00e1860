//! Seeded sampling of small rationals, shared by regular-point and
//! covector searches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::{rat, Rational};

pub const DEFAULT_SEED: u64 = 20031017;

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on `{±1, ±2, ±3}` times `1` or `1/2`; never zero.
    pub fn small_rational(&mut self) -> Rational {
        let magnitude = self.rng.gen_range(1..=3i64);
        let sign = if self.rng.gen_bool(0.5) { 1 } else { -1 };
        let denom = if self.rng.gen_bool(0.5) { 1 } else { 2 };
        rat(sign * magnitude, denom)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
