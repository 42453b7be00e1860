//! Differential polynomials on the jet space of a bundle with `n` base
//! variables and `m` dependent variables, extended by the time coordinate.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::poly::Poly;
use crate::rational::Rational;

/// Symmetric multi-index stored as an exponent vector with trailing zeros
/// trimmed, so equal multi-indices have equal representations regardless of
/// the ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(mut exponents: Vec<u32>) -> Self {
        while exponents.last() == Some(&0) {
            exponents.pop();
        }
        MultiIndex(exponents)
    }

    /// `k` derivatives along direction `dir` (zero-based).
    pub fn along(dir: usize, k: u32) -> Self {
        let mut e = vec![0; dir + 1];
        e[dir] = k;
        Self::new(e)
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, dir: usize) -> u32 {
        self.0.get(dir).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Highest direction index that occurs, plus one.
    pub fn span(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        Self::new(
            (0..len)
                .map(|i| self.exponent(i) + other.exponent(i))
                .collect(),
        )
    }

    pub fn increment(&self, dir: usize) -> Self {
        self.concat(&Self::along(dir, 1))
    }

    /// `self − other` when `other ≤ self` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_sub(*e)?;
        }
        Some(Self::new(out))
    }

    /// All `τ ≤ self` componentwise, paired with the multinomial weight
    /// `Π_i C(σ_i, τ_i)`.
    pub fn sub_indices(&self) -> Vec<(MultiIndex, Rational)> {
        let mut out = vec![(Vec::new(), Rational::from_integer(1.into()))];
        for &k in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (k as usize + 1));
            for (prefix, w) in &out {
                for j in 0..=k {
                    let mut p: Vec<u32> = prefix.clone();
                    p.push(j);
                    next.push((p, w * crate::rational::binomial(k, j)));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(e, w)| (MultiIndex::new(e), w))
            .collect()
    }

    /// Direction sequence obtained by peeling the lowest direction first.
    pub fn directions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize))
            .collect()
    }

    /// First direction with a positive exponent.
    pub fn first_direction(&self) -> Option<usize> {
        self.0.iter().position(|&k| k > 0)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coordinate on `J^∞(π) × ℝ`. The derived order is the canonical one:
/// `t < x_1 < … < x_n < u^j_σ`, jets ordered by `(j, |σ|, σ)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JetVar {
    Time,
    Base(usize),
    Jet { dep: usize, sigma: MultiIndex },
}

impl JetVar {
    pub fn jet(dep: usize, sigma: MultiIndex) -> Self {
        JetVar::Jet { dep, sigma }
    }

    pub fn fiber(dep: usize) -> Self {
        JetVar::Jet {
            dep,
            sigma: MultiIndex::empty(),
        }
    }

    pub fn jet_order(&self) -> Option<u32> {
        match self {
            JetVar::Jet { sigma, .. } => Some(sigma.order()),
            _ => None,
        }
    }
}

pub type DiffPoly = Poly<JetVar>;

pub fn var(v: JetVar) -> DiffPoly {
    DiffPoly::var(v)
}

/// `u^dep_σ` as a polynomial.
pub fn jet(dep: usize, sigma: MultiIndex) -> DiffPoly {
    DiffPoly::var(JetVar::jet(dep, sigma))
}

/// `u_k` for the scalar case `n = m = 1`.
pub fn u(k: u32) -> DiffPoly {
    jet(0, MultiIndex::along(0, k))
}

/// Highest jet order occurring in `p`, if any jet occurs.
pub fn jet_order(p: &DiffPoly) -> Option<u32> {
    p.variables().iter().filter_map(JetVar::jet_order).max()
}

pub fn partial(p: &DiffPoly, v: &JetVar) -> DiffPoly {
    p.partial(v)
}

/// `D_i(p) = ∂p/∂x_i + Σ u^j_{σi} ∂p/∂u^j_σ`.
pub fn total_derivative(p: &DiffPoly, dir: usize) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (v, dp) in p.gradient() {
        match &v {
            JetVar::Time => {}
            JetVar::Base(i) => {
                if *i == dir {
                    out += &dp;
                }
            }
            JetVar::Jet { dep, sigma } => {
                out += &(&dp * &jet(*dep, sigma.increment(dir)));
            }
        }
    }
    out
}

/// `D_σ(p)`.
pub fn total_derivative_by(p: &DiffPoly, sigma: &MultiIndex) -> DiffPoly {
    let mut out = p.clone();
    for dir in sigma.directions() {
        if out.is_zero() {
            break;
        }
        out = total_derivative(&out, dir);
    }
    out
}

/// Applies the evolutionary derivation `Ǝ_φ = Σ D_σ(φ^j) ∂/∂u^j_σ` to `p`.
pub fn evolutionary_apply(phi: &[DiffPoly], p: &DiffPoly) -> DiffPoly {
    let mut out = DiffPoly::zero();
    for (v, dp) in p.gradient() {
        if let JetVar::Jet { dep, sigma } = &v {
            let Some(component) = phi.get(*dep) else {
                continue;
            };
            let d = total_derivative_by(component, sigma);
            out += &(&d * &dp);
        }
    }
    out
}

/// Rational assignment of jet coordinates; unassigned coordinates read as 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Point {
    values: BTreeMap<JetVar, Rational>,
}

impl Point {
    pub fn origin() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: JetVar, value: Rational) {
        if value.is_zero() {
            self.values.remove(&v);
        } else {
            self.values.insert(v, value);
        }
    }

    pub fn with(mut self, v: JetVar, value: Rational) -> Self {
        self.set(v, value);
        self
    }

    pub fn get(&self, v: &JetVar) -> Rational {
        self.values.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_assigned(&self, v: &JetVar) -> bool {
        self.values.contains_key(v)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&JetVar, &Rational)> {
        self.values.iter()
    }

    pub fn eval(&self, p: &DiffPoly) -> Rational {
        p.eval(|v| self.get(v))
    }
}

/// Value of `p` at `rho` together with the coordinates of `p` that `rho`
/// left unassigned (and which were therefore read as 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub value: Rational,
    pub defaulted: Vec<JetVar>,
}

pub fn eval_at(p: &DiffPoly, rho: &Point) -> Evaluation {
    let defaulted = p
        .variables()
        .into_iter()
        .filter(|v| !rho.is_assigned(v))
        .collect();
    Evaluation {
        value: rho.eval(p),
        defaulted,
    }
}

/// Display names for coordinates: `t`, `x` / `x1..xn`, `u` / `u1..um`,
/// with jet subscripts `u_xx` (n = 1) or `u_x1x2` (n > 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Names {
    pub n: usize,
    pub m: usize,
    pub dep: String,
}

impl Default for Names {
    fn default() -> Self {
        Names {
            n: 1,
            m: 1,
            dep: "u".to_string(),
        }
    }
}

impl Names {
    pub fn new(n: usize, m: usize, dep: impl Into<String>) -> Self {
        Names {
            n,
            m,
            dep: dep.into(),
        }
    }

    pub fn base(&self, i: usize) -> String {
        if self.n == 1 {
            "x".to_string()
        } else {
            format!("x{}", i + 1)
        }
    }

    pub fn dependent(&self, j: usize) -> String {
        if self.m == 1 {
            self.dep.clone()
        } else {
            format!("{}{}", self.dep, j + 1)
        }
    }

    pub fn subscript(&self, sigma: &MultiIndex) -> String {
        sigma
            .directions()
            .into_iter()
            .map(|d| self.base(d))
            .collect()
    }

    pub fn var(&self, v: &JetVar) -> String {
        match v {
            JetVar::Time => "t".to_string(),
            JetVar::Base(i) => self.base(*i),
            JetVar::Jet { dep, sigma } if sigma.is_empty() => self.dependent(*dep),
            JetVar::Jet { dep, sigma } => {
                format!("{}_{}", self.dependent(*dep), self.subscript(sigma))
            }
        }
    }

    pub fn poly(&self, p: &DiffPoly) -> String {
        p.to_string_with(|v| self.var(v))
    }
}
