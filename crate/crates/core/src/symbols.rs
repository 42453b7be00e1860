//! Principal symbols of (multi)differential operators at jet points, and
//! the search for points where the symbol of `ℓ_f` is nondegenerate.
//!
//! The symbol is read off by coefficient extraction: at top order `l` every
//! `D_σ` is replaced by the covector monomial `θ^σ` and the coefficient is
//! evaluated at the point.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::cdiff::CDiffOperator;
use crate::diffpoly::{JetVar, MultiIndex, Point};
use crate::error::{Error, Result};
use crate::evolution::EvolutionEquation;
use crate::linalg::{poly_determinant, Matrix};
use crate::multi::MultiCDiffOperator;
use crate::poly::{Monomial, Poly};
use crate::rational::{sign_pow, Rational};
use crate::sampling::Sampler;

/// Polynomial in covector components `θ_1, …, θ_n` (zero-based indices).
pub type CovectorPoly = Poly<usize>;

/// Component `θ^slot_dir` of the covector attached to argument `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThetaVar {
    pub slot: usize,
    pub dir: usize,
}

pub type MultiCovectorPoly = Poly<ThetaVar>;

fn theta_monomial(sigma: &MultiIndex) -> Monomial<usize> {
    Monomial::from_factors(sigma.exponents().iter().copied().enumerate())
}

/// `m × m` (or rectangular) matrix of homogeneous covector polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMatrix {
    rows: usize,
    cols: usize,
    degree: u32,
    entries: Vec<CovectorPoly>,
}

impl SymbolMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        degree: u32,
        f: impl Fn(usize, usize) -> CovectorPoly,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        SymbolMatrix {
            rows,
            cols,
            degree,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn entry(&self, i: usize, j: usize) -> &CovectorPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.entries.iter().all(|e| e.is_homogeneous(self.degree))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.degree, |i, j| {
            self.entry(j, i).clone()
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, self.degree, |i, j| {
            self.entry(i, j).scale(c)
        })
    }

    /// Matrix product; degrees add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "symbol product",
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(
            self.rows,
            other.cols,
            self.degree + other.degree,
            |i, k| {
                (0..self.cols).fold(CovectorPoly::zero(), |acc, j| {
                    &acc + &(self.entry(i, j) * other.entry(j, k))
                })
            },
        ))
    }

    /// Value at a covector.
    pub fn eval(&self, theta: &[Rational]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.get_mut(i, j) = self
                    .entry(i, j)
                    .eval(|d| theta.get(*d).cloned().unwrap_or_else(Rational::zero));
            }
        }
        out
    }

    /// `det λ(θ)` as a polynomial in `θ`.
    pub fn determinant(&self) -> Result<CovectorPoly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                context: "symbol determinant",
                rows: self.rows,
                cols: self.cols,
            });
        }
        let rows: Vec<Vec<CovectorPoly>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j).clone()).collect())
            .collect();
        poly_determinant(&rows)
    }

    pub fn format(&self, n: usize) -> String {
        let name = |d: &usize| {
            if n == 1 {
                "θ".to_string()
            } else {
                format!("θ{}", d + 1)
            }
        };
        if self.rows == 1 && self.cols == 1 {
            return self.entries[0].to_string_with(name);
        }
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols)
                    .map(|j| self.entry(i, j).to_string_with(name))
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// `λ_ij(θ) = Σ_{|σ| = l} a^σ_ij(ρ) θ^σ` with `l` the order of `op`.
pub fn principal_symbol(op: &CDiffOperator, rho: &Point) -> Result<SymbolMatrix> {
    let l = op.order().ok_or(Error::ZeroOperator("principal_symbol"))?;
    Ok(SymbolMatrix::from_fn(op.rows(), op.cols(), l, |i, j| {
        let mut p = CovectorPoly::zero();
        for (sigma, a) in op.entry(i, j).summands() {
            if sigma.order() == l {
                p.add_term(theta_monomial(sigma), rho.eval(a));
            }
        }
        p
    }))
}

/// Highest `|σ|` whose coefficient does not vanish at `rho`.
pub fn order_at(op: &CDiffOperator, rho: &Point) -> Option<u32> {
    let mut best = None;
    for i in 0..op.rows() {
        for j in 0..op.cols() {
            for (sigma, a) in op.entry(i, j).summands() {
                if !rho.eval(a).is_zero() {
                    best = best.max(Some(sigma.order()));
                }
            }
        }
    }
    best
}

pub fn is_nondegenerate(symbol: &SymbolMatrix) -> Result<bool> {
    Ok(!symbol.determinant()?.is_zero())
}

/// Symbol of a multilinear operator: leading part in every argument,
/// keyed by output row and argument components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSymbol {
    pub degrees: Vec<u32>,
    pub entries: BTreeMap<(usize, Vec<usize>), MultiCovectorPoly>,
}

impl MultiSymbol {
    pub fn entry(&self, row: usize, comps: &[usize]) -> MultiCovectorPoly {
        self.entries
            .get(&(row, comps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(Poly::is_zero)
    }

    /// Value at covectors `θ^1, …, θ^a`.
    pub fn eval(&self, row: usize, comps: &[usize], thetas: &[Vec<Rational>]) -> Rational {
        self.entry(row, comps).eval(|t| {
            thetas
                .get(t.slot)
                .and_then(|v| v.get(t.dir))
                .cloned()
                .unwrap_or_else(Rational::zero)
        })
    }
}

pub fn multi_symbol(op: &MultiCDiffOperator, rho: &Point) -> Result<MultiSymbol> {
    if op.is_zero() {
        return Err(Error::ZeroOperator("multi_symbol"));
    }
    let degrees: Vec<u32> = (0..op.arity())
        .map(|p| op.slot_order(p).unwrap_or(0))
        .collect();
    let mut entries: BTreeMap<(usize, Vec<usize>), MultiCovectorPoly> = BTreeMap::new();
    for (key, c) in op.coefficients() {
        if key
            .slots
            .iter()
            .zip(&degrees)
            .any(|((_, s), l)| s.order() != *l)
        {
            continue;
        }
        let value = rho.eval(c);
        if value.is_zero() {
            continue;
        }
        let monomial =
            Monomial::from_factors(key.slots.iter().enumerate().flat_map(|(p, (_, s))| {
                s.exponents()
                    .iter()
                    .enumerate()
                    .map(move |(dir, &e)| (ThetaVar { slot: p, dir }, e))
            }));
        let comps: Vec<usize> = key.slots.iter().map(|(j, _)| *j).collect();
        entries
            .entry((key.row, comps))
            .or_default()
            .add_term(monomial, value);
    }
    entries.retain(|_, p| !p.is_zero());
    Ok(MultiSymbol { degrees, entries })
}

/// Classification of a candidate jet point for an operator of global order
/// `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointStatus {
    Regular(SymbolMatrix),
    OrderDrop { order_at: Option<u32>, order: u32 },
    Degenerate,
}

pub fn classify_point(op: &CDiffOperator, rho: &Point) -> Result<PointStatus> {
    let order = op.order().ok_or(Error::ZeroOperator("classify_point"))?;
    let local = order_at(op, rho);
    if local != Some(order) {
        return Ok(PointStatus::OrderDrop {
            order_at: local,
            order,
        });
    }
    let symbol = principal_symbol(op, rho)?;
    if is_nondegenerate(&symbol)? {
        Ok(PointStatus::Regular(symbol))
    } else {
        Ok(PointStatus::Degenerate)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularPoint {
    pub point: Point,
    pub symbol: SymbolMatrix,
    pub attempts: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RegularPointFailure {
    #[error("operator is zero")]
    ZeroOperator,
    #[error("symbol degenerate at all {attempts} sampled points")]
    DegenerateEverywhere { attempts: usize },
    #[error("leading coefficients vanish at all {attempts} sampled points")]
    OrderDropEverywhere { attempts: usize },
}

/// Coordinates that the coefficients of `op` depend on.
pub fn support(op: &CDiffOperator) -> Vec<JetVar> {
    let mut vars = Vec::new();
    for i in 0..op.rows() {
        for j in 0..op.cols() {
            for (_, a) in op.entry(i, j).summands() {
                vars.extend(a.variables());
            }
        }
    }
    vars.sort();
    vars.dedup();
    vars
}

/// Samples a fresh point assigning every coordinate in `support`.
pub fn sample_point(support: &[JetVar], sampler: &mut Sampler) -> Point {
    let mut p = Point::origin();
    for v in support {
        p.set(v.clone(), sampler.small_rational());
    }
    p
}

pub fn find_regular_point_for(
    op: &CDiffOperator,
    budget: usize,
    sampler: &mut Sampler,
) -> std::result::Result<RegularPoint, RegularPointFailure> {
    if op.is_zero() {
        return Err(RegularPointFailure::ZeroOperator);
    }
    let vars = support(op);
    let mut saw_full_order = false;
    for attempt in 1..=budget {
        let rho = sample_point(&vars, sampler);
        match classify_point(op, &rho).map_err(|_| RegularPointFailure::ZeroOperator)? {
            PointStatus::Regular(symbol) => {
                return Ok(RegularPoint {
                    point: rho,
                    symbol,
                    attempts: attempt,
                })
            }
            PointStatus::Degenerate => saw_full_order = true,
            PointStatus::OrderDrop { .. } => {}
        }
    }
    if saw_full_order {
        Err(RegularPointFailure::DegenerateEverywhere { attempts: budget })
    } else {
        Err(RegularPointFailure::OrderDropEverywhere { attempts: budget })
    }
}

/// A point where `ℓ_f` attains its global order and has a nondegenerate
/// symbol.
pub fn find_regular_point(
    eq: &EvolutionEquation,
    budget: usize,
    sampler: &mut Sampler,
) -> std::result::Result<RegularPoint, RegularPointFailure> {
    find_regular_point_for(eq.linearize(), budget, sampler)
}

/// `(−1)^l λ^T`, the symbol of the adjoint.
pub fn adjoint_symbol(symbol: &SymbolMatrix) -> SymbolMatrix {
    symbol.transpose().scale(&sign_pow(symbol.degree()))
}
