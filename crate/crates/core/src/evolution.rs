//! Evolution equations `u_t = f(t, x, u_σ)` and the invariance residuals
//! of variational multivectors and forms under their flow.

use serde::{Deserialize, Serialize};

use crate::cdiff::{CDiffEntry, CDiffOperator};
use crate::diffpoly::{evolutionary_apply, DiffPoly, JetVar};
use crate::error::{Error, Result};
use crate::multi::MultiCDiffOperator;

/// Whether an operator is a multivector (`κ̂ → κ`) or a form (`κ → κ̂`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StructureKind {
    Vector,
    Form,
}

impl StructureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StructureKind::Vector => "vector",
            StructureKind::Form => "form",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolutionEquation {
    n: usize,
    m: usize,
    rhs: Vec<DiffPoly>,
    linearization: CDiffOperator,
    adjoint_linearization: CDiffOperator,
}

impl EvolutionEquation {
    pub fn new(n: usize, m: usize, rhs: Vec<DiffPoly>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Validation(
                "an evolution equation needs at least one space and one dependent variable".into(),
            ));
        }
        if rhs.len() != m {
            return Err(Error::DimensionMismatch {
                context: "evolution right-hand side",
                expected: m,
                found: rhs.len(),
            });
        }
        for f in &rhs {
            for v in f.variables() {
                let ok = match &v {
                    JetVar::Time => true,
                    JetVar::Base(i) => *i < n,
                    JetVar::Jet { dep, sigma } => *dep < m && sigma.span() <= n,
                };
                if !ok {
                    return Err(Error::Validation(format!(
                        "coordinate {v:?} is outside the declared dimensions n = {n}, m = {m}"
                    )));
                }
            }
        }
        let linearization = linearization_of(&rhs, m);
        let adjoint_linearization = linearization.adjoint();
        Ok(EvolutionEquation {
            n,
            m,
            rhs,
            linearization,
            adjoint_linearization,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn rhs(&self) -> &[DiffPoly] {
        &self.rhs
    }

    /// `ℓ_f`.
    pub fn linearize(&self) -> &CDiffOperator {
        &self.linearization
    }

    /// `ℓ*_f`.
    pub fn adjoint_linearization(&self) -> &CDiffOperator {
        &self.adjoint_linearization
    }

    /// `ℓ_f` for multivectors, `ℓ*_f` for forms.
    pub fn flow_operator(&self, kind: StructureKind) -> &CDiffOperator {
        match kind {
            StructureKind::Vector => &self.linearization,
            StructureKind::Form => &self.adjoint_linearization,
        }
    }

    /// `D_t = ∂/∂t + Ǝ_f`.
    pub fn d_t(&self, p: &DiffPoly) -> DiffPoly {
        &p.partial(&JetVar::Time) + &evolutionary_apply(&self.rhs, p)
    }

    fn d_t_vec(&self, v: &[DiffPoly]) -> Vec<DiffPoly> {
        v.iter().map(|p| self.d_t(p)).collect()
    }

    fn check_len(&self, v: &[DiffPoly], context: &'static str) -> Result<()> {
        if v.len() == self.m {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                context,
                expected: self.m,
                found: v.len(),
            })
        }
    }

    /// `D_t(φ) − ℓ_f(φ)`.
    pub fn symmetry_residual(&self, phi: &[DiffPoly]) -> Result<Vec<DiffPoly>> {
        self.check_len(phi, "symmetry")?;
        let lf = self.linearization.apply(phi)?;
        Ok(self
            .d_t_vec(phi)
            .iter()
            .zip(&lf)
            .map(|(a, b)| a - b)
            .collect())
    }

    pub fn is_symmetry(&self, phi: &[DiffPoly]) -> Result<Verdict<Vec<DiffPoly>>> {
        let residual = self.symmetry_residual(phi)?;
        Ok(Verdict {
            holds: residual.iter().all(DiffPoly::is_zero),
            residual,
        })
    }

    /// `D_t(ψ) + ℓ*_f(ψ)`, which is `−ℓ*_E(ψ)`.
    pub fn cosymmetry_residual(&self, psi: &[DiffPoly]) -> Result<Vec<DiffPoly>> {
        self.check_len(psi, "cosymmetry")?;
        let lf = self.adjoint_linearization.apply(psi)?;
        Ok(self
            .d_t_vec(psi)
            .iter()
            .zip(&lf)
            .map(|(a, b)| a + b)
            .collect())
    }

    pub fn is_cosymmetry(&self, psi: &[DiffPoly]) -> Result<Verdict<Vec<DiffPoly>>> {
        let residual = self.cosymmetry_residual(psi)?;
        Ok(Verdict {
            holds: residual.iter().all(DiffPoly::is_zero),
            residual,
        })
    }

    fn check_square(&self, op: &CDiffOperator, context: &'static str) -> Result<()> {
        if op.rows() != self.m || op.cols() != self.m {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.m,
                found: if op.rows() != self.m {
                    op.rows()
                } else {
                    op.cols()
                },
            });
        }
        Ok(())
    }

    /// `A_t − ℓ_f∘A − A∘ℓ*_f`.
    pub fn bivector_residual(&self, a: &CDiffOperator) -> Result<StructureCheck> {
        self.check_square(a, "bivector_residual")?;
        let a_t = a.map_coefficients(|c| self.d_t(c));
        let residual = a_t
            .sub(&self.linearization.compose(a)?)?
            .sub(&a.compose(&self.adjoint_linearization)?)?;
        Ok(StructureCheck {
            skew_adjoint: a.is_skew_adjoint()?,
            nonzero: !a.is_zero(),
            residual,
        })
    }

    /// `B_t + ℓ*_f∘B + B∘ℓ_f`.
    pub fn twoform_residual(&self, b: &CDiffOperator) -> Result<StructureCheck> {
        self.check_square(b, "twoform_residual")?;
        let b_t = b.map_coefficients(|c| self.d_t(c));
        let residual = b_t
            .add(&self.adjoint_linearization.compose(b)?)?
            .add(&b.compose(&self.linearization)?)?;
        Ok(StructureCheck {
            skew_adjoint: b.is_skew_adjoint()?,
            nonzero: !b.is_zero(),
            residual,
        })
    }

    pub fn structure_residual(
        &self,
        op: &CDiffOperator,
        kind: StructureKind,
    ) -> Result<StructureCheck> {
        match kind {
            StructureKind::Vector => self.bivector_residual(op),
            StructureKind::Form => self.twoform_residual(op),
        }
    }

    fn check_multi(&self, a: &MultiCDiffOperator) -> Result<()> {
        if a.arity() == 0 {
            return Err(Error::Arity("arity must be at least 1".into()));
        }
        if a.rows() != self.m || a.cols() != self.m {
            return Err(Error::DimensionMismatch {
                context: "kresidual",
                expected: self.m,
                found: if a.rows() != self.m {
                    a.rows()
                } else {
                    a.cols()
                },
            });
        }
        Ok(())
    }

    /// Residual of the invariance condition for a `(k−1)`-linear operator,
    /// in normal form. Vectors: `A_t − ℓ_f(A(ξ)) − Σ_p A(…, ℓ*_f ξ_p, …)`;
    /// forms: `A_t + ℓ*_f(A(ξ)) + Σ_p A(…, ℓ_f ξ_p, …)`.
    pub fn kresidual(
        &self,
        a: &MultiCDiffOperator,
        kind: StructureKind,
    ) -> Result<MultiCDiffOperator> {
        self.check_multi(a)?;
        let outer = self.flow_operator(kind);
        let inner = match kind {
            StructureKind::Vector => &self.adjoint_linearization,
            StructureKind::Form => &self.linearization,
        };
        let mut rest = a.compose_outer(outer)?;
        for p in 0..a.arity() {
            rest = rest.add(&a.compose_slot(p, inner)?)?;
        }
        let a_t = a.map_coefficients(|c| self.d_t(c));
        match kind {
            StructureKind::Vector => a_t.add(&rest.neg()),
            StructureKind::Form => a_t.add(&rest),
        }
    }

    /// Left side of the invariance condition evaluated directly on
    /// arguments, with `D_t` acting on `A(ξ)` and on each `ξ_p` rather than
    /// on the coefficients of `A`. Agrees with applying [`Self::kresidual`].
    pub fn residual_on(
        &self,
        a: &MultiCDiffOperator,
        kind: StructureKind,
        args: &[Vec<DiffPoly>],
    ) -> Result<Vec<DiffPoly>> {
        self.check_multi(a)?;
        let value = a.apply(args)?;
        let mut out = self.d_t_vec(&value);
        match kind {
            StructureKind::Vector => {
                let lf = self.linearization.apply(&value)?;
                for (o, l) in out.iter_mut().zip(&lf) {
                    *o -= l;
                }
                for p in 0..args.len() {
                    let dt = self.d_t_vec(&args[p]);
                    let adj = self.adjoint_linearization.apply(&args[p])?;
                    let moved: Vec<DiffPoly> = dt.iter().zip(&adj).map(|(x, y)| x + y).collect();
                    let term = a.apply(&replace(args, p, moved))?;
                    for (o, t) in out.iter_mut().zip(&term) {
                        *o -= t;
                    }
                }
            }
            StructureKind::Form => {
                let adj = self.adjoint_linearization.apply(&value)?;
                for (o, l) in out.iter_mut().zip(&adj) {
                    *o += l;
                }
                for p in 0..args.len() {
                    let dt = self.d_t_vec(&args[p]);
                    let lf = self.linearization.apply(&args[p])?;
                    let moved: Vec<DiffPoly> = dt.iter().zip(&lf).map(|(x, y)| x - y).collect();
                    let term = a.apply(&replace(args, p, moved))?;
                    for (o, t) in out.iter_mut().zip(&term) {
                        *o -= t;
                    }
                }
            }
        }
        Ok(out)
    }
}

fn replace(args: &[Vec<DiffPoly>], p: usize, v: Vec<DiffPoly>) -> Vec<Vec<DiffPoly>> {
    let mut out = args.to_vec();
    out[p] = v;
    out
}

/// `ℓ_f` with entry `(i, j) = Σ_σ ∂f^i/∂u^j_σ · D_σ`.
fn linearization_of(rhs: &[DiffPoly], m: usize) -> CDiffOperator {
    let mut op = CDiffOperator::zero(rhs.len(), m);
    for (i, f) in rhs.iter().enumerate() {
        for (v, df) in f.gradient() {
            if let JetVar::Jet { dep, sigma } = v {
                let mut e: CDiffEntry = op.entry(i, dep).clone();
                e.add_term(sigma, &df);
                op.set(i, dep, e);
            }
        }
    }
    op
}

/// Predicate result with the residual kept for diagnostics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<R> {
    pub holds: bool,
    pub residual: R,
}

/// Outcome of testing a candidate bivector or 2-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureCheck {
    pub residual: CDiffOperator,
    pub skew_adjoint: bool,
    pub nonzero: bool,
}

impl StructureCheck {
    pub fn residual_vanishes(&self) -> bool {
        self.residual.is_zero()
    }

    /// Invariant and skew-adjoint.
    pub fn is_structure(&self) -> bool {
        self.residual_vanishes() && self.skew_adjoint
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::{jet, var, MultiIndex};
    use crate::multi::MultiKey;
    use crate::rational::int;

    fn u(k: u32) -> DiffPoly {
        crate::diffpoly::u(k)
    }

    fn dx(k: u32) -> CDiffEntry {
        CDiffEntry::d(MultiIndex::along(0, k))
    }

    fn kdv() -> EvolutionEquation {
        EvolutionEquation::new(1, 1, vec![&(&u(0) * &u(1)).scale(&int(6)) + &u(3)]).unwrap()
    }

    fn pkdv() -> EvolutionEquation {
        EvolutionEquation::new(1, 1, vec![&u(1).pow(2).scale(&int(3)) + &u(3)]).unwrap()
    }

    fn heat() -> EvolutionEquation {
        EvolutionEquation::new(1, 1, vec![u(2)]).unwrap()
    }

    fn scalar(e: CDiffEntry) -> CDiffOperator {
        CDiffOperator::scalar(e)
    }

    fn second_kdv_operator() -> CDiffOperator {
        scalar(
            dx(3)
                .add(&CDiffEntry::term(
                    MultiIndex::along(0, 1),
                    u(0).scale(&int(4)),
                ))
                .add(&CDiffEntry::multiplication(u(1).scale(&int(2)))),
        )
    }

    #[test]
    fn linearization_examples() {
        let expected = scalar(
            CDiffEntry::multiplication(u(1).scale(&int(6)))
                .add(&CDiffEntry::term(
                    MultiIndex::along(0, 1),
                    u(0).scale(&int(6)),
                ))
                .add(&dx(3)),
        );
        assert_eq!(kdv().linearize(), &expected);
        assert_eq!(heat().linearize(), &scalar(dx(2)));
        let expected =
            scalar(CDiffEntry::term(MultiIndex::along(0, 1), u(1).scale(&int(6))).add(&dx(3)));
        assert_eq!(pkdv().linearize(), &expected);
    }

    #[test]
    fn d_t_examples() {
        let e = kdv();
        assert_eq!(e.d_t(&u(0)), e.rhs()[0]);
        let expected = &(&u(1).pow(2).scale(&int(6)) + &(&u(0) * &u(2)).scale(&int(6))) + &u(4);
        assert_eq!(e.d_t(&u(1)), expected);
        let t = var(JetVar::Time);
        assert_eq!(e.d_t(&(&t * &u(0))), &u(0) + &(&t * &e.rhs()[0]));
    }

    #[test]
    fn symmetry_examples() {
        let e = kdv();
        assert!(e.is_symmetry(&[u(1)]).unwrap().holds);
        assert!(e.is_symmetry(&[e.rhs()[0].clone()]).unwrap().holds);
        let v = e.is_symmetry(&[u(0)]).unwrap();
        assert!(!v.holds);
        assert_eq!(v.residual[0], (&u(0) * &u(1)).scale(&int(-6)));
    }

    #[test]
    fn cosymmetry_examples() {
        let e = kdv();
        assert!(e.is_cosymmetry(&[DiffPoly::one()]).unwrap().holds);
        assert!(e.is_cosymmetry(&[u(0)]).unwrap().holds);
        let v = e.is_cosymmetry(&[u(1)]).unwrap();
        assert!(!v.holds);
        assert!(!v.residual[0].is_zero());
    }

    #[test]
    fn kdv_bivectors() {
        let e = kdv();
        let first = e.bivector_residual(&scalar(dx(1))).unwrap();
        assert!(first.residual_vanishes() && first.skew_adjoint && first.is_structure());
        let second = e.bivector_residual(&second_kdv_operator()).unwrap();
        assert!(second.is_structure());
        let bad = e
            .bivector_residual(&scalar(CDiffEntry::term(MultiIndex::along(0, 1), u(0))))
            .unwrap();
        assert!(!bad.residual_vanishes());
    }

    #[test]
    fn twoform_examples() {
        let b = scalar(dx(1));
        assert!(pkdv().twoform_residual(&b).unwrap().is_structure());
        let heat_check = heat().twoform_residual(&b).unwrap();
        assert_eq!(heat_check.residual, scalar(dx(3)).scale(&int(2)));
        let zero = kdv().twoform_residual(&CDiffOperator::zero(1, 1)).unwrap();
        assert!(zero.residual_vanishes() && !zero.nonzero);
    }

    #[test]
    fn kresidual_reduces_to_matrix_residuals() {
        let e = kdv();
        let a = second_kdv_operator();
        let multi = MultiCDiffOperator::from_cdiff(&a);
        let r = e.kresidual(&multi, StructureKind::Vector).unwrap();
        assert_eq!(
            r.to_cdiff().unwrap(),
            e.bivector_residual(&a).unwrap().residual
        );
        let b = scalar(CDiffEntry::term(MultiIndex::along(0, 2), u(0)).add(&dx(1)));
        let r = e
            .kresidual(&MultiCDiffOperator::from_cdiff(&b), StructureKind::Form)
            .unwrap();
        assert_eq!(
            r.to_cdiff().unwrap(),
            e.twoform_residual(&b).unwrap().residual
        );
        assert!(e
            .kresidual(&MultiCDiffOperator::zero(2, 1, 1), StructureKind::Vector)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn ternary_form_residual_is_nonzero() {
        let mut a = MultiCDiffOperator::zero(2, 1, 1);
        a.add_term(
            MultiKey {
                row: 0,
                slots: vec![(0, MultiIndex::along(0, 1)), (0, MultiIndex::along(0, 1))],
            },
            &DiffPoly::one(),
        );
        a.add_term(
            MultiKey {
                row: 0,
                slots: vec![(0, MultiIndex::empty()), (0, MultiIndex::along(0, 2))],
            },
            &DiffPoly::from_int(-1),
        );
        let r = kdv().kresidual(&a, StructureKind::Form).unwrap();
        assert!(!r.is_zero());
        let args = [vec![&u(0) * &u(2)], vec![var(JetVar::Base(0))]];
        assert_eq!(
            r.apply(&args).unwrap(),
            kdv().residual_on(&a, StructureKind::Form, &args).unwrap()
        );
    }

    #[test]
    fn dimension_checks() {
        let e = kdv();
        assert!(e.bivector_residual(&CDiffOperator::zero(2, 2)).is_err());
        assert!(e.is_symmetry(&[u(0), u(1)]).is_err());
        assert!(EvolutionEquation::new(1, 1, vec![jet(1, MultiIndex::empty())]).is_err());
        assert!(EvolutionEquation::new(1, 2, vec![u(0)]).is_err());
    }
}
