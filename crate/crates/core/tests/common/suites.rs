//! Randomized algebraic identities, 200+ seeded cases each, all exact.
#![allow(dead_code)]

use super::*;
use jetbracket::cdiff::{divergence, pairing};
use jetbracket::diffpoly::{evolutionary_apply, total_derivative, var, DiffPoly, JetVar};
use jetbracket::random::{self, Shape};
use jetbracket::rational::{int, Rational};
use jetbracket::symbols::{adjoint_symbol, multi_symbol, principal_symbol};
use jetbracket::{CDiffOperator, EvolutionEquation, MultiCDiffOperator, StructureKind};
use num_traits::Zero;
use rand::Rng;

pub const CASES: usize = 200;

fn shape(rng: &mut rand_chacha::ChaCha8Rng, m: usize) -> Shape {
    Shape {
        n: rng.gen_range(1..=2),
        m,
        max_terms: 2,
        max_degree: 2,
        max_jet_order: 2,
        with_time: true,
    }
}

pub fn adjoint_is_an_involution() {
    let mut rng = rng(1);
    for _ in 0..CASES {
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let s = shape(&mut rng, c);
        let op = random::operator(&mut rng, &s, r, c, 3);
        assert_eq!(op.adjoint().adjoint(), op);
    }
}

pub fn adjoint_reverses_composition() {
    let mut rng = rng(2);
    for _ in 0..CASES {
        let (r, k, c) = (
            rng.gen_range(1..=2),
            rng.gen_range(1..=2),
            rng.gen_range(1..=2),
        );
        let s = shape(&mut rng, 2);
        let a = random::operator(&mut rng, &s, r, k, 2);
        let b = random::operator(&mut rng, &s, k, c, 2);
        let lhs = a.compose(&b).unwrap().adjoint();
        let rhs = b.adjoint().compose(&a.adjoint()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

pub fn composition_agrees_with_application() {
    let mut rng = rng(3);
    for _ in 0..CASES {
        let s = shape(&mut rng, 2);
        let a = random::operator(&mut rng, &s, 2, 2, 2);
        let b = random::operator(&mut rng, &s, 2, 2, 2);
        let phi = random::vector(&mut rng, &s, 2);
        let lhs = a.compose(&b).unwrap().apply(&phi).unwrap();
        let rhs = a.apply(&b.apply(&phi).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

pub fn greens_identity() {
    let mut rng = rng(4);
    for _ in 0..CASES {
        let (r, c) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let s = shape(&mut rng, c.max(r));
        let op = random::operator(&mut rng, &s, r, c, 3);
        let p = random::vector(&mut rng, &s, c);
        let q = random::vector(&mut rng, &s, r);
        let lhs =
            &pairing(&q, &op.apply(&p).unwrap()) - &pairing(&op.adjoint().apply(&q).unwrap(), &p);
        let current = op.greens_current(&p, &q, s.n).unwrap();
        assert_eq!(lhs, divergence(&current));
    }
}

pub fn total_derivatives_commute() {
    let mut rng = rng(5);
    for _ in 0..CASES {
        let m = rng.gen_range(1..=2);
        let mut s = shape(&mut rng, m);
        s.n = 3;
        s.max_jet_order = 3;
        let p = random::diffpoly(&mut rng, &s);
        let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
        assert_eq!(
            total_derivative(&total_derivative(&p, i), j),
            total_derivative(&total_derivative(&p, j), i)
        );
    }
}

pub fn leibniz_and_evaluation_are_multiplicative() {
    let mut rng = rng(6);
    for _ in 0..CASES {
        let s = shape(&mut rng, 2);
        let p = random::diffpoly(&mut rng, &s);
        let q = random::diffpoly(&mut rng, &s);
        let i = rng.gen_range(0..s.n);
        let lhs = total_derivative(&(&p * &q), i);
        let rhs = &(&total_derivative(&p, i) * &q) + &(&p * &total_derivative(&q, i));
        assert_eq!(lhs, rhs);
        let rho = random_point(&mut rng, [&p, &q]);
        assert_eq!(rho.eval(&(&p * &q)), rho.eval(&p) * rho.eval(&q));
    }
}

pub fn evolutionary_fields_commute_with_total_derivatives() {
    let mut rng = rng(7);
    for _ in 0..CASES {
        let m = rng.gen_range(1..=2);
        let s = shape(&mut rng, m);
        let phi = random::vector(&mut rng, &s, m);
        let p = random::diffpoly(&mut rng, &s);
        let i = rng.gen_range(0..s.n);
        assert_eq!(
            evolutionary_apply(&phi, &total_derivative(&p, i)),
            total_derivative(&evolutionary_apply(&phi, &p), i)
        );
    }
}

fn random_equation(rng: &mut rand_chacha::ChaCha8Rng, m: usize) -> EvolutionEquation {
    let mut s = shape(rng, m);
    s.n = 1;
    s.max_jet_order = 3;
    let rhs = (0..m).map(|_| random::diffpoly(rng, &s)).collect();
    EvolutionEquation::new(1, m, rhs).unwrap()
}

pub fn linearization_and_time_derivative_coherence() {
    let mut rng = rng(8);
    for _ in 0..CASES {
        let m = rng.gen_range(1..=2);
        let eq = random_equation(&mut rng, m);
        let s = Shape {
            n: 1,
            ..shape(&mut rng, m)
        };
        let alpha = random::vector(&mut rng, &s, m);
        let lin = eq.linearize().apply(&alpha).unwrap();
        let direct: Vec<DiffPoly> = eq
            .rhs()
            .iter()
            .map(|f| evolutionary_apply(&alpha, f))
            .collect();
        assert_eq!(lin, direct);
        let p = random::diffpoly(&mut rng, &s);
        assert_eq!(
            eq.d_t(&total_derivative(&p, 0)),
            total_derivative(&eq.d_t(&p), 0)
        );
    }
}

pub fn residuals_commute_with_adjoints() {
    let mut rng = rng(9);
    for _ in 0..CASES {
        let m = rng.gen_range(1..=2);
        let eq = random_equation(&mut rng, m);
        let s = Shape {
            n: 1,
            ..shape(&mut rng, m)
        };
        let a = random::operator(&mut rng, &s, m, m, 2);
        let bivector = eq.bivector_residual(&a).unwrap().residual;
        assert_eq!(
            eq.bivector_residual(&a.adjoint()).unwrap().residual,
            bivector.adjoint()
        );
        let form = eq.twoform_residual(&a).unwrap().residual;
        assert_eq!(
            eq.twoform_residual(&a.adjoint()).unwrap().residual,
            form.adjoint()
        );
    }
}

pub fn symbol_is_multiplicative_and_transposes_under_adjoint() {
    let mut rng = rng(10);
    let mut products = 0;
    let mut trials = 0;
    while products < CASES {
        trials += 1;
        assert!(trials < 20 * CASES, "too few nondegenerate products");
        let m = rng.gen_range(1..=2);
        let s = shape(&mut rng, m);
        let a = random::operator(&mut rng, &s, m, m, 2);
        let b = random::operator(&mut rng, &s, m, m, 2);
        let ab = a.compose(&b).unwrap();
        let coeffs: Vec<DiffPoly> = [&a, &b, &ab]
            .iter()
            .flat_map(|op| operator_coefficients(op))
            .collect();
        let rho = random_point(&mut rng, coeffs.iter());
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let la = principal_symbol(&a, &rho).unwrap();
        assert_eq!(
            principal_symbol(&a.adjoint(), &rho).unwrap(),
            adjoint_symbol(&la)
        );
        let lb = principal_symbol(&b, &rho).unwrap();
        let product = la.mul(&lb).unwrap();
        if product.is_zero() {
            continue;
        }
        assert_eq!(principal_symbol(&ab, &rho).unwrap(), product);
        // Homogeneity: λ(2θ) = 2^l λ(θ).
        let theta: Vec<Rational> = (0..s.n).map(|_| small_rational(&mut rng)).collect();
        let doubled: Vec<Rational> = theta.iter().map(|x| x * int(2)).collect();
        let scale = jetbracket::rational::pow(&int(2), product.degree());
        let (p1, p2) = (product.eval(&theta), product.eval(&doubled));
        for i in 0..m {
            for j in 0..m {
                assert_eq!(p2.get(i, j), &(p1.get(i, j) * &scale));
            }
        }
        products += 1;
    }
}

pub fn delta_construction_matches_unary_symbols() {
    let mut rng = rng(11);
    let (mut cases, mut nonzero) = (0, 0);
    while cases < CASES {
        let m = rng.gen_range(1..=2);
        let s = shape(&mut rng, m);
        let op = random::operator(&mut rng, &s, m, m, 2);
        if op.is_zero() {
            continue;
        }
        let rho = random_point(&mut rng, operator_coefficients(&op).iter());
        let theta: Vec<Rational> = (0..s.n).map(|_| small_rational(&mut rng)).collect();
        let l = op.order().unwrap();
        let oracle = delta_symbol(
            &MultiCDiffOperator::from_cdiff(&op),
            &[l],
            &[theta.clone()],
            &rho,
        );
        let lambda = principal_symbol(&op, &rho).unwrap().eval(&theta);
        for ((i, comps), v) in &oracle {
            assert_eq!(lambda.get(*i, comps[0]), v);
            nonzero += usize::from(!v.is_zero());
        }
        cases += 1;
    }
    assert!(nonzero > CASES, "oracle mostly zero: {nonzero}");
}

pub fn delta_construction_matches_multilinear_symbols() {
    let mut rng = rng(13);
    let mut nonzero = 0;
    for _ in 0..CASES {
        let m = rng.gen_range(1..=2);
        let s = shape(&mut rng, m);
        let op = random::multi_operator(&mut rng, &s, 2, 2);
        let coeffs: Vec<DiffPoly> = op.coefficients().map(|(_, c)| c.clone()).collect();
        let rho = random_point(&mut rng, coeffs.iter());
        let thetas: Vec<Vec<Rational>> = (0..2)
            .map(|_| (0..s.n).map(|_| small_rational(&mut rng)).collect())
            .collect();
        let symbol = multi_symbol(&op, &rho).unwrap();
        let oracle = delta_symbol(&op, &symbol.degrees, &thetas, &rho);
        for ((row, comps), v) in &oracle {
            assert_eq!(
                &symbol.eval(*row, comps, &thetas),
                v,
                "row {row} comps {comps:?}"
            );
            nonzero += usize::from(!v.is_zero());
        }
    }
    assert!(nonzero > CASES / 2, "oracle mostly zero: {nonzero}");
}

pub fn delta_oracle_base_case() {
    let theta = vec![jetbracket::rational::rat(5, 2)];
    let dx = MultiCDiffOperator::from_cdiff(&CDiffOperator::scalar(d(1)));
    let raw = delta_symbol(
        &dx,
        &[1],
        &[theta.clone()],
        &jetbracket::diffpoly::Point::origin(),
    );
    // δ_f D_x = −θ; dividing by (−1)^1 1! leaves θ.
    assert_eq!(raw[&(0, vec![0])], theta[0]);
}

pub fn residual_time_shift_invariant() {
    let mut rng = rng(12);
    let t = var(JetVar::Time);
    for case in 0..CASES {
        let eq = if case % 4 == 0 {
            kdv()
        } else {
            random_equation(&mut rng, 1)
        };
        let s = Shape {
            n: 1,
            with_time: false,
            ..shape(&mut rng, 1)
        };
        let a = random::multi_operator(&mut rng, &s, 2, 2);
        let kind = if case % 2 == 0 {
            StructureKind::Vector
        } else {
            StructureKind::Form
        };
        let xi: Vec<Vec<DiffPoly>> = (0..2).map(|_| random::vector(&mut rng, &s, 1)).collect();
        let base = eq.residual_on(&a, kind, &xi).unwrap();
        assert_eq!(eq.kresidual(&a, kind).unwrap().apply(&xi).unwrap(), base);
        let slot = rng.gen_range(0..2);
        let mut shifted = xi.clone();
        shifted[slot] = shifted[slot].iter().map(|p| &t * p).collect();
        let lhs = eq.residual_on(&a, kind, &shifted).unwrap();
        let rhs: Vec<DiffPoly> = base.iter().map(|p| &t * p).collect();
        assert_eq!(lhs, rhs);
    }
}
