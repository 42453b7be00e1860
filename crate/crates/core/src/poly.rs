//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! The variable type is generic so the same arithmetic serves jet-space
//! differential polynomials and the covector polynomials that appear in
//! principal symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Product of variables raised to positive powers, sorted by variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial<V> {
    factors: Vec<(V, u32)>,
}

impl<V: Ord + Clone> Monomial<V> {
    pub fn one() -> Self {
        Monomial {
            factors: Vec::new(),
        }
    }

    pub fn var(v: V) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (V, u32)>) -> Self {
        let mut map: BTreeMap<V, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            factors: map.into_iter().collect(),
        }
    }

    pub fn factors(&self) -> &[(V, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &V) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    out.push((a.clone(), *ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b.clone(), *eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        Monomial { factors: out }
    }

    /// Removes one power of `v`, returning the exponent it had.
    fn lower(&self, v: &V) -> Option<(u32, Self)> {
        let idx = self.factors.binary_search_by(|(w, _)| w.cmp(v)).ok()?;
        let e = self.factors[idx].1;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(idx);
        } else {
            factors[idx].1 -= 1;
        }
        Some((e, Monomial { factors }))
    }
}

/// A polynomial in variables of type `V` over the rationals.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<V: Ord> {
    terms: BTreeMap<Monomial<V>, Rational>,
}

impl<V: Ord + Clone> Default for Poly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Ord + Clone> Poly<V> {
    pub fn zero() -> Self {
        Poly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn var(v: V) -> Self {
        Self::monomial(Monomial::var(v), Rational::one())
    }

    pub fn monomial(m: Monomial<V>, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial<V>, Rational)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial<V>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial<V>, &Rational)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Returns the constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// All variables occurring with a nonzero coefficient, sorted.
    pub fn variables(&self) -> Vec<V> {
        let mut vars: Vec<V> = self
            .terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(v, _)| v.clone()))
            .collect();
        vars.sort();
        vars.dedup();
        vars
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial<V>) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (n.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial(&self, v: &V) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                out.add_term(lowered, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Evaluates with the given assignment of variables.
    pub fn eval(&self, value: impl Fn(&V) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.factors {
                let x = value(v);
                if x.is_zero() {
                    t = Rational::zero();
                    break;
                }
                t *= crate::rational::pow(&x, *e);
            }
            total += t;
        }
        total
    }

    /// Substitutes polynomials for variables; variables for which `sub`
    /// returns `None` are kept.
    pub fn substitute<W: Ord + Clone>(
        &self,
        sub: impl Fn(&V) -> Option<Poly<W>>,
        keep: impl Fn(&V) -> W,
    ) -> Poly<W> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (v, e) in &m.factors {
                let factor = match sub(v) {
                    Some(p) => p.pow(*e),
                    None => {
                        Poly::monomial(Monomial::from_factors([(keep(v), *e)]), Rational::one())
                    }
                };
                t = &t * &factor;
            }
            out += &t;
        }
        out
    }

    /// Partial derivatives paired with their variables.
    pub fn gradient(&self) -> Vec<(V, Self)> {
        self.variables()
            .into_iter()
            .map(|v| {
                let d = self.partial(&v);
                (v, d)
            })
            .collect()
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn fmt_with(&self, f: &mut impl fmt::Write, name: &impl Fn(&V) -> String) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut first = true;
            if !abs.is_one() || m.is_one() {
                write!(f, "{}", crate::rational::format(&abs))?;
                first = false;
            }
            for (v, e) in &m.factors {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", name(v))?;
                if *e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }

    pub fn to_string_with(&self, name: impl Fn(&V) -> String) -> String {
        let mut s = String::new();
        self.fmt_with(&mut s, &name).expect("writing to a String");
        s
    }
}

impl<V: Ord + Clone + fmt::Debug> fmt::Debug for Poly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_string_with(|v| format!("{v:?}"));
        write!(f, "{s}")
    }
}

impl<V: Ord + Clone> AddAssign<&Poly<V>> for Poly<V> {
    fn add_assign(&mut self, rhs: &Poly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<V: Ord + Clone> SubAssign<&Poly<V>> for Poly<V> {
    fn sub_assign(&mut self, rhs: &Poly<V>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<V: Ord + Clone> Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<V: Ord + Clone> Add for Poly<V> {
    type Output = Poly<V>;
    fn add(mut self, rhs: Poly<V>) -> Poly<V> {
        self += &rhs;
        self
    }
}

impl<V: Ord + Clone> Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<V: Ord + Clone> Sub for Poly<V> {
    type Output = Poly<V>;
    fn sub(mut self, rhs: Poly<V>) -> Poly<V> {
        self -= &rhs;
        self
    }
}

impl<V: Ord + Clone> Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl<V: Ord + Clone> Neg for Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        -&self
    }
}

impl<V: Ord + Clone> Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl<V: Ord + Clone> Mul for Poly<V> {
    type Output = Poly<V>;
    fn mul(self, rhs: Poly<V>) -> Poly<V> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    type P = Poly<u8>;

    #[test]
    fn arithmetic_is_canonical() {
        let x = P::var(0);
        let y = P::var(1);
        let p = &(&x + &y) * &(&x - &y);
        let q = &x.pow(2) - &y.pow(2);
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn partial_and_eval() {
        let x = P::var(0);
        let y = P::var(1);
        let p = &(&x.pow(3) * &y).scale(&rat(2, 1)) + &P::from_int(5);
        assert_eq!(p.partial(&0), (&x.pow(2) * &y).scale(&rat(6, 1)));
        assert_eq!(p.partial(&2), P::zero());
        let v = p.eval(|v| if *v == 0 { rat(1, 2) } else { rat(3, 1) });
        assert_eq!(v, rat(2 * 3, 8) + rat(5, 1));
    }

    #[test]
    fn homogeneity() {
        let x = P::var(0);
        let y = P::var(1);
        assert!((&x * &y + x.pow(2)).is_homogeneous(2));
        assert!(!(&x + &x.pow(2)).is_homogeneous(2));
    }
}
