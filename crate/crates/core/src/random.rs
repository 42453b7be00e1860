//! Seeded generators of random differential polynomials and operators, used
//! by the property suites and by the consistency probe.

use rand::Rng;

use crate::cdiff::{CDiffEntry, CDiffOperator};
use crate::diffpoly::{DiffPoly, JetVar, MultiIndex};
use crate::multi::{MultiCDiffOperator, MultiKey};
use crate::poly::Monomial;
use crate::rational::rat;

/// Shape limits for generated objects.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub n: usize,
    pub m: usize,
    pub max_terms: usize,
    pub max_degree: u32,
    pub max_jet_order: u32,
    pub with_time: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            n: 1,
            m: 1,
            max_terms: 3,
            max_degree: 2,
            max_jet_order: 2,
            with_time: false,
        }
    }
}

pub fn multi_index<R: Rng>(rng: &mut R, n: usize, order: u32) -> MultiIndex {
    let mut e = vec![0u32; n];
    for _ in 0..order {
        e[rng.gen_range(0..n)] += 1;
    }
    MultiIndex::new(e)
}

pub fn coordinate<R: Rng>(rng: &mut R, shape: &Shape) -> JetVar {
    let roll = rng.gen_range(0..10);
    if shape.with_time && roll == 0 {
        JetVar::Time
    } else if roll == 1 {
        JetVar::Base(rng.gen_range(0..shape.n))
    } else {
        let order = rng.gen_range(0..=shape.max_jet_order);
        JetVar::jet(rng.gen_range(0..shape.m), multi_index(rng, shape.n, order))
    }
}

pub fn coefficient<R: Rng>(rng: &mut R) -> crate::rational::Rational {
    let mut c = 0;
    while c == 0 {
        c = rng.gen_range(-4i64..=4);
    }
    rat(c, rng.gen_range(1..=2))
}

pub fn diffpoly<R: Rng>(rng: &mut R, shape: &Shape) -> DiffPoly {
    let terms = rng.gen_range(0..=shape.max_terms);
    let mut p = DiffPoly::zero();
    for _ in 0..terms {
        let degree = rng.gen_range(0..=shape.max_degree);
        let m = Monomial::from_factors((0..degree).map(|_| (coordinate(rng, shape), 1)));
        p.add_term(m, coefficient(rng));
    }
    p
}

pub fn nonzero_diffpoly<R: Rng>(rng: &mut R, shape: &Shape) -> DiffPoly {
    loop {
        let p = diffpoly(rng, shape);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn entry<R: Rng>(rng: &mut R, shape: &Shape, max_order: u32) -> CDiffEntry {
    let mut e = CDiffEntry::zero();
    for _ in 0..rng.gen_range(0..=3) {
        let order = rng.gen_range(0..=max_order);
        e.add_term(multi_index(rng, shape.n, order), &diffpoly(rng, shape));
    }
    e
}

pub fn operator<R: Rng>(
    rng: &mut R,
    shape: &Shape,
    rows: usize,
    cols: usize,
    max_order: u32,
) -> CDiffOperator {
    let entries = (0..rows)
        .map(|_| (0..cols).map(|_| entry(rng, shape, max_order)).collect())
        .collect();
    CDiffOperator::from_rows(entries).expect("rectangular by construction")
}

/// Operator whose coefficients are all `±1, ±2` constants.
pub fn constant_operator<R: Rng>(
    rng: &mut R,
    n: usize,
    rows: usize,
    cols: usize,
    max_order: u32,
) -> CDiffOperator {
    let constant_entry = |rng: &mut R| {
        let mut e = CDiffEntry::zero();
        for _ in 0..rng.gen_range(0..=2) {
            let order = rng.gen_range(0..=max_order);
            let c = [1, -1, 2, -2][rng.gen_range(0..4)];
            e.add_term(multi_index(rng, n, order), &DiffPoly::from_int(c));
        }
        e
    };
    let entries = (0..rows)
        .map(|_| (0..cols).map(|_| constant_entry(rng)).collect())
        .collect();
    CDiffOperator::from_rows(entries).expect("rectangular by construction")
}

pub fn vector<R: Rng>(rng: &mut R, shape: &Shape, len: usize) -> Vec<DiffPoly> {
    (0..len).map(|_| diffpoly(rng, shape)).collect()
}

/// Nonzero `arity`-linear operator on `m`-component arguments.
pub fn multi_operator<R: Rng>(
    rng: &mut R,
    shape: &Shape,
    arity: usize,
    max_order: u32,
) -> MultiCDiffOperator {
    loop {
        let mut a = MultiCDiffOperator::zero(arity, shape.m, shape.m);
        for _ in 0..rng.gen_range(1..=4) {
            let key = MultiKey {
                row: rng.gen_range(0..shape.m),
                slots: (0..arity)
                    .map(|_| {
                        let order = rng.gen_range(0..=max_order);
                        (rng.gen_range(0..shape.m), multi_index(rng, shape.n, order))
                    })
                    .collect(),
            };
            a.add_term(key, &diffpoly(rng, shape));
        }
        if !a.is_zero() {
            return a;
        }
    }
}
