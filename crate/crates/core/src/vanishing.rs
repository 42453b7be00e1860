//! Vanishing certificates for invariant multivectors and forms of degree
//! `k ≥ 3`, and the structural conclusions they imply for bivectors and
//! 2-forms.
//!
//! A certificate is explicit rational data: a jet point `ρ` where the
//! symbol `λ` of `ℓ_f` (or `ℓ*_f`) is nondegenerate, a covector `v` with
//! `det λ(v) ≠ 0`, and scalars `α_p` such that the linear system satisfied
//! by the symbol of any invariant `(k−1)`-linear operator has a nonzero
//! determinant at `θ^p = α_p v`. A nonzero determinant at one rational point
//! shows the determinant polynomial is not identically zero, which forces
//! the symbol to vanish.

use num_traits::Zero;
use serde::Serialize;

use crate::cdiff::CDiffOperator;
use crate::diffpoly::Point;
use crate::error::{Error, Result};
use crate::evolution::{EvolutionEquation, StructureKind};
use crate::linalg::Matrix;
use crate::multi::MultiCDiffOperator;
use crate::rational::{int, pow, rat, sign_pow, Rational};
use crate::sampling::Sampler;
use crate::symbols::{
    adjoint_symbol, classify_point, find_regular_point, principal_symbol, PointStatus,
    RegularPointFailure, SymbolMatrix,
};

/// Index tuples `(i, i_1, …, i_{k−1})` in lexicographic order.
fn index_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..m).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

fn flat_index(m: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &j| acc * m + j)
}

/// Coefficient matrix of the linear system for the symbol components
/// `a^j_{i_1…i_{k−1}}`, with rows indexed by `(i, i_1, …, i_{k−1})`:
///
/// `Σ_j λ^i_j(θ^1+…+θ^{k−1}) a^j_I + (−1)^l Σ_p Σ_j λ^{i_p}_j(θ^p) a^i_{I[p→j]}`.
pub fn build_symbol_system(
    symbol: &SymbolMatrix,
    k: usize,
    thetas: &[Vec<Rational>],
) -> Result<Matrix> {
    if symbol.rows() != symbol.cols() {
        return Err(Error::NotSquare {
            context: "build_symbol_system",
            rows: symbol.rows(),
            cols: symbol.cols(),
        });
    }
    if k < 2 {
        return Err(Error::Arity(format!("k must be at least 2, found {k}")));
    }
    if thetas.len() != k - 1 {
        return Err(Error::DimensionMismatch {
            context: "build_symbol_system covectors",
            expected: k - 1,
            found: thetas.len(),
        });
    }
    let n = thetas[0].len();
    if let Some(bad) = thetas.iter().find(|t| t.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "build_symbol_system covector length",
            expected: n,
            found: bad.len(),
        });
    }
    let m = symbol.rows();
    let sum: Vec<Rational> = (0..n).map(|d| thetas.iter().map(|t| &t[d]).sum()).collect();
    let at_sum = symbol.eval(&sum);
    let at_slot: Vec<Matrix> = thetas.iter().map(|t| symbol.eval(t)).collect();
    let sign = sign_pow(symbol.degree());

    let size = m.pow(k as u32);
    let mut system = Matrix::zeros(size, size);
    for t in index_tuples(m, k) {
        let row = flat_index(m, &t);
        let i = t[0];
        for j in 0..m {
            let mut col = t.clone();
            col[0] = j;
            *system.get_mut(row, flat_index(m, &col)) += at_sum.get(i, j);
        }
        for p in 1..k {
            let ip = t[p];
            for j in 0..m {
                let mut col = t.clone();
                col[p] = j;
                *system.get_mut(row, flat_index(m, &col)) += &sign * at_slot[p - 1].get(ip, j);
            }
        }
    }
    Ok(system)
}

/// Diagonal quantity `d_i (Σα)^l + (−1)^l Σ_p d_{i_p} α_p^l`, which is the
/// diagonal of the system when `λ(v)` is triangular with diagonal `d`.
pub fn diagonal_quantity(
    diag: &[Rational],
    l: u32,
    alpha: &[Rational],
    tuple: &[usize],
) -> Rational {
    let total: Rational = alpha.iter().sum();
    let mut q = &diag[tuple[0]] * pow(&total, l);
    let sign = sign_pow(l);
    for (p, a) in alpha.iter().enumerate() {
        q += &sign * &diag[tuple[p + 1]] * pow(a, l);
    }
    q
}

/// Candidate `α` vectors, `(1, …, 1)` first, then tuples of small distinct
/// rationals. Candidates whose diagonal quantities are all nonzero for the
/// given diagonal data come first. Empty when `l < 2` or `k < 3`.
pub fn alpha_heuristic(diag: &[Rational], l: u32, k: usize, limit: usize) -> Vec<Vec<Rational>> {
    if l < 2 || k < 3 || diag.is_empty() || limit == 0 {
        return Vec::new();
    }
    let arity = k - 1;
    let pool = [
        int(1),
        int(2),
        int(-1),
        int(3),
        rat(1, 2),
        int(-2),
        rat(3, 2),
        rat(-1, 2),
        int(-3),
        rat(1, 3),
        rat(-3, 2),
        rat(2, 3),
    ];
    let mut candidates: Vec<Vec<Rational>> = vec![vec![int(1); arity]];
    let mut shift = 0usize;
    'outer: for stride in 1..pool.len() {
        for start in 0..pool.len() {
            if candidates.len() >= limit {
                break 'outer;
            }
            let c: Vec<Rational> = (0..arity)
                .map(|p| pool[(start + p * stride + shift) % pool.len()].clone())
                .collect();
            let mut sorted = c.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() == c.len() && !candidates.contains(&c) {
                candidates.push(c);
            }
        }
        shift += 1;
    }
    candidates.truncate(limit);

    let m = diag.len();
    let tuples = index_tuples(m, k);
    let (good, rest): (Vec<_>, Vec<_>) = candidates.into_iter().partition(|alpha| {
        tuples
            .iter()
            .all(|t| !diagonal_quantity(diag, l, alpha, t).is_zero())
    });
    good.into_iter().chain(rest).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingCertificate {
    pub k: usize,
    pub kind: StructureKind,
    pub seed: u64,
    pub point: Point,
    pub order: u32,
    pub covector: Vec<Rational>,
    pub alpha: Vec<Rational>,
    pub symbol_det: Rational,
    pub system_det: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum SearchFailure {
    InvalidDegree { k: usize },
    ZeroLinearization,
    OrderTooLow { order: u32 },
    DegenerateSymbol { attempts: usize },
    OrderDropEverywhere { attempts: usize },
    Unlucky { covectors: usize, alphas: usize },
    Inconsistent { detail: String },
}

impl std::fmt::Display for SearchFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchFailure::InvalidDegree { k } => write!(f, "degree k = {k} is below 3"),
            SearchFailure::ZeroLinearization => write!(f, "hypothesis violated: the linearization is zero"),
            SearchFailure::OrderTooLow { order } => {
                write!(f, "hypothesis violated: order ≤ 1 (ord ℓ_f = {order})")
            }
            SearchFailure::DegenerateSymbol { attempts } => write!(
                f,
                "hypothesis not confirmed: symbol degenerate at all {attempts} sampled points"
            ),
            SearchFailure::OrderDropEverywhere { attempts } => write!(
                f,
                "no regular point found: leading coefficients vanish at all {attempts} sampled points"
            ),
            SearchFailure::Unlucky { covectors, alphas } => write!(
                f,
                "search budget exhausted after {covectors} covectors and {alphas} alpha candidates"
            ),
            SearchFailure::Inconsistent { detail } => write!(f, "internal inconsistency: {detail}"),
        }
    }
}

impl std::error::Error for SearchFailure {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    /// Jet points tried when looking for a regular point.
    pub point_budget: usize,
    pub covector_budget: usize,
    pub alpha_budget: usize,
    /// Independent regular points to certify at.
    pub samples: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: crate::sampling::DEFAULT_SEED,
            point_budget: 200,
            covector_budget: 200,
            alpha_budget: 50,
            samples: 5,
        }
    }
}

fn symbol_for(
    eq: &EvolutionEquation,
    kind: StructureKind,
    rho: &Point,
) -> std::result::Result<SymbolMatrix, SearchFailure> {
    let direct = principal_symbol(eq.flow_operator(kind), rho)
        .map_err(|_| SearchFailure::ZeroLinearization)?;
    if kind == StructureKind::Form {
        let lf =
            principal_symbol(eq.linearize(), rho).map_err(|_| SearchFailure::ZeroLinearization)?;
        if adjoint_symbol(&lf) != direct {
            return Err(SearchFailure::Inconsistent {
                detail: "symbol of ℓ*_f differs from (−1)^l λ(ℓ_f)^T".into(),
            });
        }
    }
    Ok(direct)
}

/// Certificate at one regular point, sampled with `config.seed`.
pub fn search_certificate(
    eq: &EvolutionEquation,
    k: usize,
    kind: StructureKind,
    config: &SearchConfig,
) -> std::result::Result<VanishingCertificate, SearchFailure> {
    if k < 3 {
        return Err(SearchFailure::InvalidDegree { k });
    }
    let mut sampler = Sampler::new(config.seed);
    let regular =
        find_regular_point(eq, config.point_budget, &mut sampler).map_err(|e| match e {
            RegularPointFailure::ZeroOperator => SearchFailure::ZeroLinearization,
            RegularPointFailure::DegenerateEverywhere { attempts } => {
                SearchFailure::DegenerateSymbol { attempts }
            }
            RegularPointFailure::OrderDropEverywhere { attempts } => {
                SearchFailure::OrderDropEverywhere { attempts }
            }
        })?;
    let order = regular.symbol.degree();
    if order < 2 {
        return Err(SearchFailure::OrderTooLow { order });
    }
    let symbol = symbol_for(eq, kind, &regular.point)?;
    let n = eq.n();

    let mut covectors_tried = 0;
    let mut alphas_tried = 0;
    let mut covector = vec![int(1); n];
    for attempt in 0..config.covector_budget {
        if attempt > 0 {
            covector = (0..n).map(|_| sampler.small_rational()).collect();
        }
        covectors_tried += 1;
        let at_v = symbol.eval(&covector);
        let symbol_det = at_v.determinant().expect("square symbol");
        if symbol_det.is_zero() {
            continue;
        }
        let diag: Vec<Rational> = (0..eq.m()).map(|i| at_v.get(i, i).clone()).collect();
        for alpha in alpha_heuristic(&diag, order, k, config.alpha_budget) {
            alphas_tried += 1;
            let thetas: Vec<Vec<Rational>> = alpha
                .iter()
                .map(|a| covector.iter().map(|c| a * c).collect())
                .collect();
            let system = build_symbol_system(&symbol, k, &thetas).expect("validated shapes");
            let system_det = system.determinant().expect("square system");
            if !system_det.is_zero() {
                return Ok(VanishingCertificate {
                    k,
                    kind,
                    seed: config.seed,
                    point: regular.point,
                    order,
                    covector,
                    alpha,
                    symbol_det,
                    system_det,
                });
            }
        }
    }
    Err(SearchFailure::Unlucky {
        covectors: covectors_tried,
        alphas: alphas_tried,
    })
}

/// Certificates at `config.samples` independent regular points, seeds
/// `seed, seed + 1, …`, in seed order.
pub fn certify(
    eq: &EvolutionEquation,
    k: usize,
    kind: StructureKind,
    config: &SearchConfig,
) -> std::result::Result<Vec<VanishingCertificate>, SearchFailure> {
    (0..config.samples.max(1))
        .map(|i| {
            let cfg = SearchConfig {
                seed: config.seed.wrapping_add(i as u64),
                ..*config
            };
            search_certificate(eq, k, kind, &cfg)
        })
        .collect()
}

/// Re-derives every claim of `cert` from scratch, using Bareiss
/// elimination for the determinants.
pub fn verify_certificate(eq: &EvolutionEquation, cert: &VanishingCertificate) -> Result<()> {
    let fail = |msg: String| Err(Error::InvalidCertificate(msg));
    if cert.k < 3 {
        return fail(format!("k = {} is below 3", cert.k));
    }
    if cert.alpha.len() != cert.k - 1 || cert.alpha.iter().any(Zero::is_zero) {
        return fail("alpha must have k − 1 nonzero entries".into());
    }
    if cert.covector.len() != eq.n() {
        return fail(format!(
            "covector has {} components, expected {}",
            cert.covector.len(),
            eq.n()
        ));
    }
    let order = eq.linearize().order();
    if order != Some(cert.order) {
        return fail(format!(
            "recorded order {} differs from ord ℓ_f = {order:?}",
            cert.order
        ));
    }
    if cert.order < 2 {
        return fail("order must be at least 2".into());
    }
    match classify_point(eq.linearize(), &cert.point)? {
        PointStatus::Regular(_) => {}
        other => return fail(format!("point is not regular: {other:?}")),
    }
    let symbol = principal_symbol(eq.flow_operator(cert.kind), &cert.point)?;
    let symbol_det = symbol.eval(&cert.covector).determinant_bareiss()?;
    if symbol_det.is_zero() || symbol_det != cert.symbol_det {
        return fail(format!(
            "det λ(v) recomputes to {symbol_det}, recorded {}",
            cert.symbol_det
        ));
    }
    let thetas: Vec<Vec<Rational>> = cert
        .alpha
        .iter()
        .map(|a| cert.covector.iter().map(|c| a * c).collect())
        .collect();
    let system_det = build_symbol_system(&symbol, cert.k, &thetas)?.determinant_bareiss()?;
    if system_det.is_zero() || system_det != cert.system_det {
        return fail(format!(
            "system determinant recomputes to {system_det}, recorded {}",
            cert.system_det
        ));
    }
    Ok(())
}

/// What the `k = 3` certificates imply for the supplied bivectors and
/// 2-forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub hamiltonian: Vec<String>,
    pub compatible_pairs: Vec<(String, String)>,
    pub symplectic: Vec<String>,
    pub statements: Vec<String>,
    pub scope: String,
}

pub const LINEAR_STRUCTURES_ONLY: &str = "only linear Hamiltonian and symplectic structures can exist on this equation, since the vanishing argument never uses skew-symmetry";

pub fn conclude(
    eq: &EvolutionEquation,
    vector_certificates: &[VanishingCertificate],
    form_certificates: &[VanishingCertificate],
    bivectors: &[(String, CDiffOperator)],
    two_forms: &[(String, CDiffOperator)],
) -> Result<Conclusion> {
    for (certs, kind) in [
        (vector_certificates, StructureKind::Vector),
        (form_certificates, StructureKind::Form),
    ] {
        for c in certs {
            if c.kind != kind || c.k != 3 {
                return Err(Error::InvalidCertificate(format!(
                    "expected a k = 3 {} certificate, found k = {} {}",
                    kind.as_str(),
                    c.k,
                    c.kind.as_str()
                )));
            }
            verify_certificate(eq, c)?;
        }
    }
    if !bivectors.is_empty() && vector_certificates.is_empty() {
        return Err(Error::InvalidCertificate(
            "no k = 3 vector certificate: bivector conclusions withheld".into(),
        ));
    }
    if !two_forms.is_empty() && form_certificates.is_empty() {
        return Err(Error::InvalidCertificate(
            "no k = 3 form certificate: 2-form conclusions withheld".into(),
        ));
    }
    if vector_certificates.is_empty() && form_certificates.is_empty() {
        return Err(Error::InvalidCertificate("no certificates supplied".into()));
    }

    let mut hamiltonian = Vec::new();
    for (name, a) in bivectors {
        if eq.bivector_residual(a)?.is_structure() && !a.is_zero() {
            hamiltonian.push(name.clone());
        }
    }
    let mut compatible_pairs = Vec::new();
    for (i, a) in hamiltonian.iter().enumerate() {
        for b in &hamiltonian[i + 1..] {
            compatible_pairs.push((a.clone(), b.clone()));
        }
    }
    let mut symplectic = Vec::new();
    for (name, b) in two_forms {
        if eq.twoform_residual(b)?.is_structure() && !b.is_zero() {
            symplectic.push(name.clone());
        }
    }

    let mut statements = Vec::new();
    if !vector_certificates.is_empty() {
        statements.push(
            "every variational bivector is Hamiltonian and any two are compatible: their Schouten brackets are variational 3-vectors, which vanish".to_string(),
        );
    }
    if !form_certificates.is_empty() {
        statements.push(
            "every variational 2-form is symplectic: its differential is a variational 3-form, which vanishes".to_string(),
        );
    }
    for name in &hamiltonian {
        statements.push(format!("{name} is Hamiltonian"));
    }
    for (a, b) in &compatible_pairs {
        statements.push(format!(
            "{a}, {b}: Hamiltonian pair, automatically compatible"
        ));
    }
    for name in &symplectic {
        statements.push(format!("{name} is symplectic"));
    }
    statements.push(LINEAR_STRUCTURES_ONLY.to_string());

    let points = vector_certificates.len().max(form_certificates.len());
    Ok(Conclusion {
        hamiltonian,
        compatible_pairs,
        symplectic,
        statements,
        scope: format!(
            "3-vectors/3-forms have vanishing symbol at all {points} sampled regular points; the global statement relies on regular points being dense"
        ),
    })
}

/// Residuals of random nonzero `(k−1)`-linear operators; on a certified
/// equation every one of them must be nonzero.
pub fn consistency_probe(
    eq: &EvolutionEquation,
    k: usize,
    kind: StructureKind,
    count: usize,
    seed: u64,
) -> Result<Vec<MultiCDiffOperator>> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let shape = crate::random::Shape {
        n: eq.n(),
        m: eq.m(),
        max_terms: 2,
        max_degree: 2,
        max_jet_order: 2,
        with_time: true,
    };
    (0..count)
        .map(|_| {
            let a = crate::random::multi_operator(&mut rng, &shape, k - 1, 2);
            eq.kresidual(&a, kind)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cdiff::CDiffEntry;
    use crate::diffpoly::{u, MultiIndex};
    use crate::symbols::CovectorPoly;

    fn kdv() -> EvolutionEquation {
        EvolutionEquation::new(1, 1, vec![&(&u(0) * &u(1)).scale(&int(6)) + &u(3)]).unwrap()
    }

    fn heat() -> EvolutionEquation {
        EvolutionEquation::new(1, 1, vec![u(2)]).unwrap()
    }

    fn transport() -> EvolutionEquation {
        EvolutionEquation::new(1, 1, vec![u(1)]).unwrap()
    }

    fn scalar_symbol(l: u32) -> SymbolMatrix {
        SymbolMatrix::from_fn(1, 1, l, |_, _| CovectorPoly::var(0).pow(l))
    }

    #[test]
    fn scalar_systems() {
        let s = build_symbol_system(&scalar_symbol(3), 3, &[vec![int(1)], vec![int(1)]]).unwrap();
        assert_eq!(s.rows(), 1);
        assert_eq!(s.get(0, 0), &int(6));

        let s =
            build_symbol_system(&scalar_symbol(1), 3, &[vec![int(2)], vec![rat(-5, 3)]]).unwrap();
        assert!(s.get(0, 0).is_zero());

        let s = build_symbol_system(
            &scalar_symbol(3),
            4,
            &[vec![int(1)], vec![int(1)], vec![int(1)]],
        )
        .unwrap();
        assert_eq!(s.get(0, 0), &int(24));
    }

    #[test]
    fn system_shape_errors() {
        assert!(build_symbol_system(&scalar_symbol(2), 3, &[vec![int(1)]]).is_err());
        assert!(build_symbol_system(&scalar_symbol(2), 1, &[]).is_err());
        let rect = SymbolMatrix::from_fn(1, 2, 1, |_, _| CovectorPoly::var(0));
        assert!(build_symbol_system(&rect, 3, &[vec![int(1)], vec![int(1)]]).is_err());
    }

    #[test]
    fn heuristic_examples() {
        let a = alpha_heuristic(&[int(1)], 3, 3, 50);
        assert_eq!(a[0], vec![int(1), int(1)]);
        assert_eq!(diagonal_quantity(&[int(1)], 3, &a[0], &[0, 0, 0]), int(6));
        let a = alpha_heuristic(&[int(1)], 2, 3, 50);
        assert_eq!(diagonal_quantity(&[int(1)], 2, &a[0], &[0, 0, 0]), int(6));
        assert!(alpha_heuristic(&[int(1)], 1, 3, 50).is_empty());
        assert!(alpha_heuristic(&[int(1)], 3, 2, 50).is_empty());
        let many = alpha_heuristic(&[int(1)], 4, 3, 50);
        assert_eq!(many.len(), 50);
        let mut dedup = many.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), many.len());
    }

    #[test]
    fn kdv_and_heat_certificates() {
        let cfg = SearchConfig::default();
        for eq in [kdv(), heat()] {
            let c = search_certificate(&eq, 3, StructureKind::Vector, &cfg).unwrap();
            assert_eq!(c.covector, vec![int(1)]);
            assert_eq!(c.alpha, vec![int(1), int(1)]);
            assert_eq!(c.system_det, int(6));
            verify_certificate(&eq, &c).unwrap();
        }
        let c = search_certificate(&kdv(), 4, StructureKind::Vector, &cfg).unwrap();
        assert_eq!(c.system_det, int(24));
        let c = search_certificate(&kdv(), 3, StructureKind::Form, &cfg).unwrap();
        verify_certificate(&kdv(), &c).unwrap();
    }

    #[test]
    fn transport_is_rejected() {
        let r = search_certificate(
            &transport(),
            3,
            StructureKind::Vector,
            &SearchConfig::default(),
        );
        assert_eq!(r, Err(SearchFailure::OrderTooLow { order: 1 }));
        assert!(r.unwrap_err().to_string().contains("order ≤ 1"));
        assert_eq!(
            search_certificate(&kdv(), 2, StructureKind::Vector, &SearchConfig::default()),
            Err(SearchFailure::InvalidDegree { k: 2 })
        );
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let mut c =
            search_certificate(&kdv(), 3, StructureKind::Vector, &SearchConfig::default()).unwrap();
        c.system_det = int(7);
        assert!(matches!(
            verify_certificate(&kdv(), &c),
            Err(Error::InvalidCertificate(_))
        ));
    }

    #[test]
    fn kdv_pair_conclusion() {
        let eq = kdv();
        let certs = certify(&eq, 3, StructureKind::Vector, &SearchConfig::default()).unwrap();
        assert_eq!(certs.len(), 5);
        let a1 = CDiffOperator::scalar(CDiffEntry::d(MultiIndex::along(0, 1)));
        let a2 = CDiffOperator::scalar(
            CDiffEntry::d(MultiIndex::along(0, 3))
                .add(&CDiffEntry::term(
                    MultiIndex::along(0, 1),
                    u(0).scale(&int(4)),
                ))
                .add(&CDiffEntry::multiplication(u(1).scale(&int(2)))),
        );
        let c = conclude(
            &eq,
            &certs,
            &[],
            &[("A1".into(), a1), ("A2".into(), a2)],
            &[],
        )
        .unwrap();
        assert_eq!(c.hamiltonian, vec!["A1", "A2"]);
        assert_eq!(
            c.compatible_pairs,
            vec![("A1".to_string(), "A2".to_string())]
        );
        assert!(c
            .statements
            .iter()
            .any(|s| s.contains("Hamiltonian pair, automatically compatible")));

        let withheld = conclude(
            &eq,
            &[],
            &[],
            &[("A1".into(), CDiffOperator::identity(1))],
            &[],
        );
        assert!(withheld.is_err());
    }
}
