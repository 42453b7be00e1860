//! Matrix C-differential operators `Σ_σ a_σ D_σ` with differential
//! polynomial coefficients, kept in the normal form where every
//! coefficient sits to the left of its total derivative.

use std::collections::BTreeMap;

use crate::diffpoly::{total_derivative, total_derivative_by, DiffPoly, MultiIndex, Names};
use crate::error::{Error, Result};
use crate::rational::{sign_pow, Rational};

/// One scalar entry `Σ_σ a_σ D_σ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CDiffEntry {
    summands: BTreeMap<MultiIndex, DiffPoly>,
}

impl CDiffEntry {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Multiplication by `a`.
    pub fn multiplication(a: DiffPoly) -> Self {
        Self::term(MultiIndex::empty(), a)
    }

    pub fn d(sigma: MultiIndex) -> Self {
        Self::term(sigma, DiffPoly::one())
    }

    pub fn term(sigma: MultiIndex, a: DiffPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(sigma, &a);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (MultiIndex, DiffPoly)>) -> Self {
        let mut e = Self::zero();
        for (s, a) in terms {
            e.add_term(s, &a);
        }
        e
    }

    pub fn add_term(&mut self, sigma: MultiIndex, a: &DiffPoly) {
        if a.is_zero() {
            return;
        }
        let slot = self.summands.entry(sigma.clone()).or_default();
        *slot += a;
        if slot.is_zero() {
            self.summands.remove(&sigma);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn order(&self) -> Option<u32> {
        self.summands.keys().map(MultiIndex::order).max()
    }

    pub fn coefficient(&self, sigma: &MultiIndex) -> DiffPoly {
        self.summands.get(sigma).cloned().unwrap_or_default()
    }

    pub fn summands(&self) -> impl DoubleEndedIterator<Item = (&MultiIndex, &DiffPoly)> {
        self.summands.iter()
    }

    pub fn apply(&self, phi: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (sigma, a) in &self.summands {
            out += &(a * &total_derivative_by(phi, sigma));
        }
        out
    }

    /// `D_σ ∘ a` expanded by the multinomial Leibniz rule.
    pub fn leibniz(sigma: &MultiIndex, a: &DiffPoly) -> Self {
        let mut out = Self::zero();
        for (tau, weight) in sigma.sub_indices() {
            let rest = sigma.checked_sub(&tau).expect("sub-index");
            out.add_term(rest, &total_derivative_by(a, &tau).scale(&weight));
        }
        out
    }

    pub fn compose(&self, inner: &Self) -> Self {
        let mut out = Self::zero();
        for (sigma, a) in &self.summands {
            for (tau, b) in &inner.summands {
                for (rho, c) in Self::leibniz(sigma, b).summands {
                    out.add_term(rho.concat(tau), &(a * &c));
                }
            }
        }
        out
    }

    /// `Σ_σ (−1)^{|σ|} D_σ ∘ a_σ` for a single entry (no transposition).
    pub fn formal_adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (sigma, a) in &self.summands {
            let signed = a.scale(&sign_pow(sigma.order()));
            for (rho, c) in Self::leibniz(sigma, &signed).summands {
                out.add_term(rho, &c);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, a) in &other.summands {
            out.add_term(s.clone(), a);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|a| -a)
    }

    /// Left multiplication by a function.
    pub fn premultiply(&self, f: &DiffPoly) -> Self {
        self.map_coefficients(|a| f * a)
    }

    pub fn map_coefficients(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        Self::from_terms(self.summands.iter().map(|(s, a)| (s.clone(), f(a))))
    }

    /// Largest direction index used by any `D_σ`, plus one.
    pub fn span(&self) -> usize {
        self.summands
            .keys()
            .map(MultiIndex::span)
            .max()
            .unwrap_or(0)
    }

    pub fn format(&self, names: &Names) -> String {
        if self.summands.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (sigma, a)) in self.summands.iter().rev().enumerate() {
            let term = format_term(names, sigma, a);
            if idx == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

pub fn d_name(names: &Names, sigma: &MultiIndex) -> String {
    format!("D_{}", names.subscript(sigma))
}

fn format_term(names: &Names, sigma: &MultiIndex, a: &DiffPoly) -> String {
    if sigma.is_empty() {
        let s = names.poly(a);
        return if a.len() > 1 { format!("({s})") } else { s };
    }
    let d = d_name(names, sigma);
    if let Some(c) = a.as_constant() {
        if c == Rational::from_integer(1.into()) {
            return d;
        }
        if c == Rational::from_integer((-1).into()) {
            return format!("-{d}");
        }
    }
    if a.len() == 1 {
        format!("{}*{d}", names.poly(a))
    } else {
        format!("({})*{d}", names.poly(a))
    }
}

/// `rows × cols` matrix of [`CDiffEntry`], stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CDiffOperator {
    rows: usize,
    cols: usize,
    entries: Vec<CDiffEntry>,
}

impl CDiffOperator {
    pub fn zero(rows: usize, cols: usize) -> Self {
        CDiffOperator {
            rows,
            cols,
            entries: vec![CDiffEntry::zero(); rows * cols],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut op = Self::zero(m, m);
        for i in 0..m {
            op.set(i, i, CDiffEntry::multiplication(DiffPoly::one()));
        }
        op
    }

    pub fn scalar(entry: CDiffEntry) -> Self {
        CDiffOperator {
            rows: 1,
            cols: 1,
            entries: vec![entry],
        }
    }

    pub fn from_rows(rows: Vec<Vec<CDiffEntry>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: "operator rows",
                    expected: c,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(CDiffOperator {
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> CDiffEntry) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        CDiffOperator {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &CDiffEntry {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: CDiffEntry) {
        self.entries[i * self.cols + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CDiffEntry::is_zero)
    }

    pub fn order(&self) -> Option<u32> {
        self.entries.iter().filter_map(CDiffEntry::order).max()
    }

    pub fn span(&self) -> usize {
        self.entries.iter().map(CDiffEntry::span).max().unwrap_or(0)
    }

    pub fn apply(&self, phi: &[DiffPoly]) -> Result<Vec<DiffPoly>> {
        if phi.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "apply",
                expected: self.cols,
                found: phi.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = DiffPoly::zero();
                for (j, p) in phi.iter().enumerate() {
                    acc += &self.entry(i, j).apply(p);
                }
                acc
            })
            .collect())
    }

    /// Normal form of `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.cols != inner.rows {
            return Err(Error::DimensionMismatch {
                context: "compose",
                expected: self.cols,
                found: inner.rows,
            });
        }
        Ok(Self::from_fn(self.rows, inner.cols, |i, k| {
            (0..self.cols).fold(CDiffEntry::zero(), |acc, j| {
                acc.add(&self.entry(i, j).compose(inner.entry(j, k)))
            })
        }))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| {
            self.entry(j, i).formal_adjoint()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.entry(i, j).add(other.entry(i, j))
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_entries(CDiffEntry::neg)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_entries(|e| e.map_coefficients(|a| a.scale(c)))
    }

    pub fn map_entries(&self, f: impl Fn(&CDiffEntry) -> CDiffEntry) -> Self {
        CDiffOperator {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn map_coefficients(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Self {
        self.map_entries(|e| e.map_coefficients(&f))
    }

    fn check_same_shape(&self, other: &Self, context: &'static str) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows,
                found: other.rows,
            });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.cols,
                found: other.cols,
            });
        }
        Ok(())
    }

    fn require_square(&self, context: &'static str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                context,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn is_skew_adjoint(&self) -> Result<bool> {
        self.require_square("is_skew_adjoint")?;
        Ok(self.adjoint().add(self)?.is_zero())
    }

    pub fn is_self_adjoint(&self) -> Result<bool> {
        self.require_square("is_self_adjoint")?;
        Ok(self.adjoint() == *self)
    }

    /// Current `J` with `⟨q, Δp⟩ − ⟨Δ*q, p⟩ = Σ_i D_i(J_i)`, built by
    /// integrating each summand by parts one derivative at a time, lowest
    /// direction first.
    pub fn greens_current(
        &self,
        p: &[DiffPoly],
        q: &[DiffPoly],
        n: usize,
    ) -> Result<Vec<DiffPoly>> {
        if p.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "greens_current (p)",
                expected: self.cols,
                found: p.len(),
            });
        }
        if q.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "greens_current (q)",
                expected: self.rows,
                found: q.len(),
            });
        }
        if self.span() > n {
            return Err(Error::DimensionMismatch {
                context: "greens_current (directions)",
                expected: n,
                found: self.span(),
            });
        }
        let mut current = vec![DiffPoly::zero(); n];
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (sigma, a) in self.entry(i, j).summands() {
                    let mut weight = &q[i] * a;
                    let mut rest = sigma.clone();
                    while let Some(dir) = rest.first_direction() {
                        rest = rest
                            .checked_sub(&MultiIndex::along(dir, 1))
                            .expect("positive exponent");
                        current[dir] += &(&weight * &total_derivative_by(&p[j], &rest));
                        weight = -total_derivative(&weight, dir);
                    }
                }
            }
        }
        Ok(current)
    }

    pub fn format(&self, names: &Names) -> String {
        if self.rows == 1 && self.cols == 1 {
            return self.entries[0].format(names);
        }
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols)
                    .map(|j| self.entry(i, j).format(names))
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// `⟨a, b⟩ = Σ_i a_i b_i`.
pub fn pairing(a: &[DiffPoly], b: &[DiffPoly]) -> DiffPoly {
    a.iter()
        .zip(b)
        .fold(DiffPoly::zero(), |acc, (x, y)| &acc + &(x * y))
}

/// `Σ_i D_i(J_i)`.
pub fn divergence(current: &[DiffPoly]) -> DiffPoly {
    current
        .iter()
        .enumerate()
        .fold(DiffPoly::zero(), |acc, (i, j)| {
            &acc + &total_derivative(j, i)
        })
}
