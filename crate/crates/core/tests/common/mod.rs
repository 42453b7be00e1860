#![allow(dead_code)]

pub mod suites;

use std::collections::BTreeMap;

use jetbracket::diffpoly::{var, DiffPoly, JetVar, Point};
use jetbracket::rational::{factorial, int, Rational};
use jetbracket::{CDiffEntry, CDiffOperator, EvolutionEquation, MultiCDiffOperator, MultiIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn kdv() -> EvolutionEquation {
    let u = |k| jetbracket::diffpoly::u(k);
    EvolutionEquation::new(1, 1, vec![&(&u(0) * &u(1)).scale(&int(6)) + &u(3)]).unwrap()
}

pub fn d(k: u32) -> CDiffEntry {
    CDiffEntry::d(MultiIndex::along(0, k))
}

/// `D_x³ + 4u D_x + 2u_x`, the second Hamiltonian operator of KdV.
pub fn kdv_a2() -> CDiffOperator {
    let u = |k| jetbracket::diffpoly::u(k);
    CDiffOperator::scalar(
        d(3).add(&CDiffEntry::term(
            MultiIndex::along(0, 1),
            u(0).scale(&int(4)),
        ))
        .add(&CDiffEntry::multiplication(u(1).scale(&int(2)))),
    )
}

/// `f = θ·x`.
pub fn linear_function(theta: &[Rational]) -> DiffPoly {
    theta
        .iter()
        .enumerate()
        .fold(DiffPoly::zero(), |acc, (i, c)| {
            &acc + &var(JetVar::Base(i)).scale(c)
        })
}

/// Symbol of a multilinear operator by the iterated commutator
/// construction: apply `δ^{(p)}_f A = f·A − A(…, f ξ_p, …)` with
/// `f = θ^p·x`, `l_p` times in each slot, expanding the `2^L` terms
/// directly, then divide by `Π_p (−1)^{l_p} l_p!`. Arguments are unit
/// vectors, so the result is keyed by output row and argument components.
pub fn delta_symbol(
    op: &MultiCDiffOperator,
    degrees: &[u32],
    thetas: &[Vec<Rational>],
    rho: &Point,
) -> BTreeMap<(usize, Vec<usize>), Rational> {
    let arity = op.arity();
    let m = op.cols();
    let fs: Vec<DiffPoly> = thetas.iter().map(|t| linear_function(t)).collect();
    // One entry per individual δ application: the slot it acts on.
    let slots: Vec<usize> = (0..arity)
        .flat_map(|p| std::iter::repeat(p).take(degrees[p] as usize))
        .collect();
    let total = slots.len();
    let norm = degrees.iter().fold(int(1), |acc, &l| {
        let sign = if l % 2 == 0 { int(1) } else { int(-1) };
        acc * sign * factorial(l)
    });

    let mut out = BTreeMap::new();
    let mut comps = vec![0usize; arity];
    loop {
        let mut acc = vec![DiffPoly::zero(); op.rows()];
        for subset in 0u64..(1u64 << total) {
            // Terms in the subset move f inside their slot; the rest stay outside.
            let mut outside = DiffPoly::one();
            let mut inside = vec![DiffPoly::one(); arity];
            for (r, &p) in slots.iter().enumerate() {
                if subset & (1 << r) != 0 {
                    inside[p] = &inside[p] * &fs[p];
                } else {
                    outside = &outside * &fs[p];
                }
            }
            let args: Vec<Vec<DiffPoly>> = (0..arity)
                .map(|p| {
                    let mut e = vec![DiffPoly::zero(); m];
                    e[comps[p]] = inside[p].clone();
                    e
                })
                .collect();
            let value = op.apply(&args).unwrap();
            let sign = if subset.count_ones() % 2 == 0 {
                int(1)
            } else {
                int(-1)
            };
            for (a, v) in acc.iter_mut().zip(&value) {
                *a += &(&outside * v).scale(&sign);
            }
        }
        for (row, a) in acc.iter().enumerate() {
            let value = rho.eval(a) / &norm;
            out.insert((row, comps.clone()), value);
        }
        // Next component tuple.
        let mut p = 0;
        loop {
            if p == arity {
                return out;
            }
            comps[p] += 1;
            if comps[p] < m {
                break;
            }
            comps[p] = 0;
            p += 1;
        }
    }
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    use rand::Rng;
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-3i64..=3);
    }
    jetbracket::rational::rat(n, rng.gen_range(1..=2))
}

/// Random values for every coordinate of `polys`, including `x` and `t`.
pub fn random_point<'a>(
    rng: &mut ChaCha8Rng,
    polys: impl IntoIterator<Item = &'a DiffPoly>,
) -> Point {
    let mut point = Point::origin();
    for p in polys {
        for v in p.variables() {
            if !point.is_assigned(&v) {
                point.set(v, small_rational(rng));
            }
        }
    }
    point
}

pub fn operator_coefficients(op: &CDiffOperator) -> Vec<DiffPoly> {
    let mut out = Vec::new();
    for i in 0..op.rows() {
        for j in 0..op.cols() {
            out.extend(op.entry(i, j).summands().map(|(_, a)| a.clone()));
        }
    }
    out
}
