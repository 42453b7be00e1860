//! Exact determinants: Gaussian elimination over ℚ, fraction-free Bareiss
//! elimination over ℤ, and cofactor expansion over polynomial rings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    context: "matrix rows",
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn require_square(&self, context: &'static str) -> Result<()> {
        if self.rows == self.cols {
            Ok(())
        } else {
            Err(Error::NotSquare {
                context,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant by Gaussian elimination with exact rational pivots.
    pub fn determinant(&self) -> Result<Rational> {
        self.require_square("determinant")?;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &p;
                for c in col..n {
                    let delta = &factor * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
        Ok(det)
    }

    /// Determinant by Bareiss elimination on the integer matrix obtained by
    /// clearing each row's denominators; independent of [`Self::determinant`].
    pub fn determinant_bareiss(&self) -> Result<Rational> {
        self.require_square("determinant_bareiss")?;
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let lcm = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            a.push(
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect(),
            );
            scale *= lcm;
        }
        let det = bareiss(a);
        Ok(Rational::new(det, scale))
    }
}

/// Fraction-free elimination; every division is exact.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign.is_negative() {
        -det
    } else {
        det
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion
/// along the first row, skipping zero entries.
pub fn poly_determinant<V: Ord + Clone>(m: &[Vec<Poly<V>>]) -> Result<Poly<V>> {
    let n = m.len();
    for row in m {
        if row.len() != n {
            return Err(Error::NotSquare {
                context: "polynomial determinant",
                rows: n,
                cols: row.len(),
            });
        }
    }
    let cols: Vec<usize> = (0..n).collect();
    Ok(cofactor(m, 0, &cols))
}

fn cofactor<V: Ord + Clone>(m: &[Vec<Poly<V>>], row: usize, cols: &[usize]) -> Poly<V> {
    if cols.is_empty() {
        return Poly::one();
    }
    let mut acc = Poly::zero();
    for (idx, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = cofactor(m, row + 1, &rest);
        let term = entry * &minor;
        if idx % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
    }
    acc
}
