//! Multilinear C-differential operators
//! `(ξ_1, …, ξ_a) ↦ Σ c · Π_p D_{σ_p}(ξ_p^{j_p})` with values in `rows`
//! components.

use std::collections::BTreeMap;

use crate::cdiff::{CDiffEntry, CDiffOperator};
use crate::diffpoly::{total_derivative, total_derivative_by, DiffPoly, MultiIndex, Names};
use crate::error::{Error, Result};

/// Output row plus, for every slot in order, the component and the
/// derivative applied to that argument.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiKey {
    pub row: usize,
    pub slots: Vec<(usize, MultiIndex)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiCDiffOperator {
    arity: usize,
    rows: usize,
    cols: usize,
    coefficients: BTreeMap<MultiKey, DiffPoly>,
}

impl MultiCDiffOperator {
    /// `arity` arguments, each with `cols` components.
    pub fn zero(arity: usize, rows: usize, cols: usize) -> Self {
        MultiCDiffOperator {
            arity,
            rows,
            cols,
            coefficients: BTreeMap::new(),
        }
    }

    pub fn from_cdiff(op: &CDiffOperator) -> Self {
        let mut out = Self::zero(1, op.rows(), op.cols());
        for i in 0..op.rows() {
            for j in 0..op.cols() {
                for (sigma, a) in op.entry(i, j).summands() {
                    out.add_term(
                        MultiKey {
                            row: i,
                            slots: vec![(j, sigma.clone())],
                        },
                        a,
                    );
                }
            }
        }
        out
    }

    pub fn to_cdiff(&self) -> Result<CDiffOperator> {
        if self.arity != 1 {
            return Err(Error::Arity(format!(
                "only unary operators convert to matrix form, arity is {}",
                self.arity
            )));
        }
        let mut op = CDiffOperator::zero(self.rows, self.cols);
        for (key, c) in &self.coefficients {
            let (j, sigma) = &key.slots[0];
            let mut e = op.entry(key.row, *j).clone();
            e.add_term(sigma.clone(), c);
            op.set(key.row, *j, e);
        }
        Ok(op)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn add_term(&mut self, key: MultiKey, c: &DiffPoly) {
        debug_assert_eq!(key.slots.len(), self.arity);
        if c.is_zero() {
            return;
        }
        let slot = self.coefficients.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coefficients.remove(&key);
        }
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&MultiKey, &DiffPoly)> {
        self.coefficients.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Highest derivative order applied to argument `slot`.
    pub fn slot_order(&self, slot: usize) -> Option<u32> {
        self.coefficients
            .keys()
            .map(|k| k.slots[slot].1.order())
            .max()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coefficients {
            out.add_term(k.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|c| -c)
    }

    pub fn map_coefficients(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        let mut out = Self::zero(self.arity, self.rows, self.cols);
        for (k, c) in &self.coefficients {
            out.add_term(k.clone(), &f(c));
        }
        out
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::Arity(format!(
                "arities {} and {} differ",
                self.arity, other.arity
            )));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "multilinear operator shape",
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn apply(&self, args: &[Vec<DiffPoly>]) -> Result<Vec<DiffPoly>> {
        if args.len() != self.arity {
            return Err(Error::Arity(format!(
                "expected {} arguments, found {}",
                self.arity,
                args.len()
            )));
        }
        for a in args {
            if a.len() != self.cols {
                return Err(Error::DimensionMismatch {
                    context: "multilinear apply",
                    expected: self.cols,
                    found: a.len(),
                });
            }
        }
        let mut cache: BTreeMap<(usize, usize, MultiIndex), DiffPoly> = BTreeMap::new();
        let mut out = vec![DiffPoly::zero(); self.rows];
        for (key, c) in &self.coefficients {
            let mut term = c.clone();
            for (p, (j, sigma)) in key.slots.iter().enumerate() {
                let d = cache
                    .entry((p, *j, sigma.clone()))
                    .or_insert_with(|| total_derivative_by(&args[p][*j], sigma));
                term = &term * d;
                if term.is_zero() {
                    break;
                }
            }
            out[key.row] += &term;
        }
        Ok(out)
    }

    /// The operator `ξ ↦ D_dir(A(ξ))`.
    pub fn total_derivative(&self, dir: usize) -> Self {
        let mut out = Self::zero(self.arity, self.rows, self.cols);
        for (key, c) in &self.coefficients {
            out.add_term(key.clone(), &total_derivative(c, dir));
            for p in 0..self.arity {
                let mut k = key.clone();
                k.slots[p].1 = k.slots[p].1.increment(dir);
                out.add_term(k, c);
            }
        }
        out
    }

    pub fn total_derivative_by(&self, sigma: &MultiIndex) -> Self {
        sigma
            .directions()
            .into_iter()
            .fold(self.clone(), |acc, d| acc.total_derivative(d))
    }

    /// `ξ ↦ op(A(ξ))`.
    pub fn compose_outer(&self, op: &CDiffOperator) -> Result<Self> {
        if op.cols() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "compose_outer",
                expected: self.rows,
                found: op.cols(),
            });
        }
        let mut derived: BTreeMap<MultiIndex, Self> = BTreeMap::new();
        let mut out = Self::zero(self.arity, op.rows(), self.cols);
        for i in 0..op.rows() {
            for j in 0..op.cols() {
                for (tau, b) in op.entry(i, j).summands() {
                    let d = derived
                        .entry(tau.clone())
                        .or_insert_with(|| self.total_derivative_by(tau));
                    for (key, c) in d.coefficients.iter().filter(|(k, _)| k.row == j) {
                        let mut k = key.clone();
                        k.row = i;
                        out.add_term(k, &(b * c));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `ξ ↦ A(ξ_1, …, op(ξ_slot), …, ξ_a)`.
    pub fn compose_slot(&self, slot: usize, op: &CDiffOperator) -> Result<Self> {
        if slot >= self.arity {
            return Err(Error::Arity(format!(
                "slot {slot} out of range for arity {}",
                self.arity
            )));
        }
        if op.rows() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "compose_slot",
                expected: self.cols,
                found: op.rows(),
            });
        }
        let mut out = Self::zero(self.arity, self.rows, op.cols());
        for (key, c) in &self.coefficients {
            let (comp, sigma) = &key.slots[slot];
            for j in 0..op.cols() {
                for (tau, b) in op.entry(*comp, j).summands() {
                    for (rest, coeff) in CDiffEntry::leibniz(sigma, b).summands() {
                        let mut k = key.clone();
                        k.slots[slot] = (j, rest.concat(tau));
                        out.add_term(k, &(c * coeff));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Swaps arguments `p` and `q`.
    pub fn swap_slots(&self, p: usize, q: usize) -> Self {
        let mut out = Self::zero(self.arity, self.rows, self.cols);
        for (key, c) in &self.coefficients {
            let mut k = key.clone();
            k.slots.swap(p, q);
            out.add_term(k, c);
        }
        out
    }

    /// Antisymmetry under every transposition of adjacent arguments.
    pub fn is_skew_symmetric(&self) -> bool {
        (1..self.arity).all(|p| self.swap_slots(p - 1, p) == self.neg())
    }

    pub fn format(&self, names: &Names) -> String {
        if self.coefficients.is_empty() {
            return "0".to_string();
        }
        let mut rows: Vec<String> = Vec::new();
        for row in 0..self.rows {
            let mut s = String::new();
            for (key, c) in self.coefficients.iter().filter(|(k, _)| k.row == row) {
                let mut term = String::new();
                let coeff = if c.len() > 1 {
                    format!("({})", names.poly(c))
                } else {
                    names.poly(c)
                };
                let (negative, coeff) = match coeff.strip_prefix('-') {
                    Some(rest) => (true, rest.to_string()),
                    None => (false, coeff),
                };
                if coeff != "1" {
                    term.push_str(&coeff);
                }
                for (p, (j, sigma)) in key.slots.iter().enumerate() {
                    if !term.is_empty() {
                        term.push('*');
                    }
                    let arg = if self.cols == 1 {
                        format!("p{}", p + 1)
                    } else {
                        format!("p{}[{}]", p + 1, j + 1)
                    };
                    if sigma.is_empty() {
                        term.push_str(&arg);
                    } else {
                        term.push_str(&format!("{}({arg})", crate::cdiff::d_name(names, sigma)));
                    }
                }
                if s.is_empty() {
                    if negative {
                        s.push('-');
                    }
                } else {
                    s.push_str(if negative { " - " } else { " + " });
                }
                s.push_str(&term);
            }
            if s.is_empty() {
                s.push('0');
            }
            rows.push(s);
        }
        if rows.len() == 1 {
            rows.remove(0)
        } else {
            format!("[{}]", rows.join(", "))
        }
    }
}
