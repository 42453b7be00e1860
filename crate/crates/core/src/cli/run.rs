use std::fmt::Write as _;

use serde::Serialize;

use super::parser::{format_vector, Check, ProblemFile};
use crate::cdiff::{d_name, CDiffEntry, CDiffOperator};
use crate::diffpoly::{DiffPoly, MultiIndex, Names, Point};
use crate::error::Error;
use crate::evolution::{EvolutionEquation, StructureKind};
use crate::rational::format as fmt_rat;
use crate::sampling::{Sampler, DEFAULT_SEED};
use crate::symbols::find_regular_point_for;
use crate::vanishing::{
    certify, conclude, verify_certificate, SearchConfig, SearchFailure, VanishingCertificate,
};

pub const SCHEMA: &str = "jetbracket-report/1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub seed: u64,
    /// Regular points certified per vanishing check.
    pub samples: usize,
    /// Jet points and covectors tried per certificate.
    pub budget: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: DEFAULT_SEED,
            samples: 5,
            budget: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
    Error,
    CertificateFailure,
}

impl Verdict {
    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Info => "INFO",
            Verdict::Error => "ERROR",
            Verdict::CertificateFailure => "NO CERTIFICATE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorJson {
    pub var: String,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermJson {
    pub coefficient: String,
    pub factors: Vec<FactorJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyJson {
    pub text: String,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn new(p: &DiffPoly, names: &Names) -> Self {
        PolyJson {
            text: names.poly(p),
            terms: p
                .terms()
                .map(|(m, c)| TermJson {
                    coefficient: fmt_rat(c),
                    factors: m
                        .factors()
                        .iter()
                        .map(|(v, e)| FactorJson {
                            var: names.var(v),
                            exponent: *e,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandJson {
    pub derivative: String,
    pub sigma: Vec<u32>,
    pub coefficient: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryJson {
    pub row: usize,
    pub col: usize,
    pub text: String,
    pub summands: Vec<SummandJson>,
}

/// Nonzero entries only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorJson {
    pub rows: usize,
    pub cols: usize,
    pub text: String,
    pub entries: Vec<EntryJson>,
}

impl OperatorJson {
    pub fn new(op: &CDiffOperator, names: &Names) -> Self {
        let mut entries = Vec::new();
        for i in 0..op.rows() {
            for j in 0..op.cols() {
                let e = op.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                entries.push(EntryJson {
                    row: i,
                    col: j,
                    text: e.format(names),
                    summands: e
                        .summands()
                        .rev()
                        .map(|(sigma, a)| SummandJson {
                            derivative: if sigma.is_empty() {
                                String::new()
                            } else {
                                d_name(names, sigma)
                            },
                            sigma: padded(sigma, names.n),
                            coefficient: PolyJson::new(a, names),
                        })
                        .collect(),
                });
            }
        }
        OperatorJson {
            rows: op.rows(),
            cols: op.cols(),
            text: op.format(names),
            entries,
        }
    }
}

fn padded(sigma: &MultiIndex, n: usize) -> Vec<u32> {
    (0..n).map(|d| sigma.exponent(d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointEntryJson {
    pub var: String,
    pub value: String,
}

fn point_json(point: &Point, names: &Names) -> Vec<PointEntryJson> {
    point
        .entries()
        .map(|(v, x)| PointEntryJson {
            var: names.var(v),
            value: fmt_rat(x),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub k: usize,
    pub kind: StructureKind,
    pub seed: u64,
    pub order: u32,
    pub point: Vec<PointEntryJson>,
    pub covector: Vec<String>,
    pub alpha: Vec<String>,
    pub symbol_det: String,
    pub system_det: String,
    pub verified: bool,
}

impl CertificateJson {
    fn new(c: &VanishingCertificate, names: &Names, verified: bool) -> Self {
        CertificateJson {
            k: c.k,
            kind: c.kind,
            seed: c.seed,
            order: c.order,
            point: point_json(&c.point, names),
            covector: c.covector.iter().map(fmt_rat).collect(),
            alpha: c.alpha.iter().map(fmt_rat).collect(),
            symbol_det: fmt_rat(&c.symbol_det),
            system_det: fmt_rat(&c.system_det),
            verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Details {
    Structure {
        operator: OperatorJson,
        residual: OperatorJson,
        skew_adjoint: bool,
        nonzero: bool,
    },
    Section {
        residual: Vec<PolyJson>,
    },
    Vanishing {
        k: usize,
        kind: StructureKind,
        certificates: Vec<CertificateJson>,
        failure: Option<SearchFailure>,
        message: Option<String>,
    },
    Symbol {
        order: Option<u32>,
        symbol: Vec<Vec<String>>,
        nondegenerate: Option<bool>,
        regular_point: Option<Vec<PointEntryJson>>,
    },
    Adjoint {
        adjoint: OperatorJson,
        skew_adjoint: Option<bool>,
        self_adjoint: Option<bool>,
    },
    Compose {
        result: OperatorJson,
    },
    Error {
        message: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub id: usize,
    pub check: String,
    pub verdict: Verdict,
    pub summary: String,
    pub details: Details,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConclusionReport {
    Established {
        hamiltonian: Vec<String>,
        compatible_pairs: Vec<(String, String)>,
        symplectic: Vec<String>,
        statements: Vec<String>,
        scope: String,
    },
    Withheld {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationJson {
    pub dependent: String,
    pub rhs: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariablesJson {
    pub base: Vec<String>,
    pub dependent: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
    pub variables: VariablesJson,
    pub equation: Vec<EquationJson>,
    pub checks: Vec<CheckReport>,
    pub conclusion: Option<ConclusionReport>,
    pub exit_code: i32,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "jetbracket report (seed {})", self.seed);
        let _ = writeln!(
            out,
            "variables: {}; {}",
            self.variables.base.join(", "),
            self.variables.dependent.join(", ")
        );
        for e in &self.equation {
            let _ = writeln!(out, "equation: {}_t = {}", e.dependent, e.rhs.text);
        }
        for c in &self.checks {
            let _ = writeln!(out, "[{}] check {}: {}", c.id, c.check, c.verdict.label());
            for line in c.summary.lines() {
                let _ = writeln!(out, "    {line}");
            }
        }
        match &self.conclusion {
            None => {}
            Some(ConclusionReport::Withheld { reason }) => {
                let _ = writeln!(out, "conclusion: withheld");
                let _ = writeln!(out, "    {reason}");
            }
            Some(ConclusionReport::Established {
                statements, scope, ..
            }) => {
                let _ = writeln!(out, "conclusion:");
                for s in statements {
                    let _ = writeln!(out, "    {s}");
                }
                let _ = writeln!(out, "    scope: {scope}");
            }
        }
        let _ = writeln!(out, "exit code: {}", self.exit_code);
        out
    }
}

/// Text of `λ(θ)` with jet-polynomial coefficients, one string per entry.
pub fn symbolic_symbol(op: &CDiffOperator, names: &Names) -> (Option<u32>, Vec<Vec<String>>) {
    let order = op.order();
    let text = (0..op.rows())
        .map(|i| {
            (0..op.cols())
                .map(|j| match order {
                    Some(l) => symbol_entry_text(op.entry(i, j), l, names),
                    None => "0".to_string(),
                })
                .collect()
        })
        .collect();
    (order, text)
}

fn theta_monomial(sigma: &MultiIndex, n: usize) -> String {
    let mut parts = Vec::new();
    for d in 0..n {
        let e = sigma.exponent(d);
        if e == 0 {
            continue;
        }
        let name = if n == 1 {
            "θ".to_string()
        } else {
            format!("θ{}", d + 1)
        };
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
    }
    parts.join("*")
}

fn symbol_entry_text(e: &CDiffEntry, l: u32, names: &Names) -> String {
    let mut out = String::new();
    for (sigma, a) in e.summands().rev().filter(|(s, _)| s.order() == l) {
        let theta = theta_monomial(sigma, names.n);
        let coeff = names.poly(a);
        let term = match (coeff.as_str(), theta.is_empty()) {
            (c, true) if a.len() > 1 => format!("({c})"),
            (c, true) => c.to_string(),
            ("1", false) => theta,
            ("-1", false) => format!("-{theta}"),
            (c, false) if a.len() > 1 => format!("({c})*{theta}"),
            (c, false) => format!("{c}*{theta}"),
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            let _ = write!(out, " - {rest}");
        } else {
            let _ = write!(out, " + {term}");
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

fn error_report(id: usize, check: &Check, err: &Error) -> CheckReport {
    let message = format!("check {id} ({check}): {err}");
    CheckReport {
        id,
        check: check.to_string(),
        verdict: Verdict::Error,
        summary: message.clone(),
        details: Details::Error { message },
    }
}

fn section_summary(holds: bool, residual: &[DiffPoly], names: &Names) -> String {
    if holds {
        "residual vanishes".to_string()
    } else {
        format!("residual: {}", format_vector(residual, names))
    }
}

struct Runner<'a> {
    file: &'a ProblemFile,
    options: RunOptions,
    equation: Option<std::result::Result<EvolutionEquation, Error>>,
    vector_certificates: Vec<VanishingCertificate>,
    form_certificates: Vec<VanishingCertificate>,
    certificate_failures: Vec<String>,
}

impl Runner<'_> {
    fn equation(&mut self) -> std::result::Result<&EvolutionEquation, Error> {
        if self.equation.is_none() {
            self.equation = Some(self.file.evolution());
        }
        self.equation
            .as_ref()
            .expect("just set")
            .as_ref()
            .map_err(Clone::clone)
    }

    fn operator(&self, name: &str) -> &CDiffOperator {
        self.file
            .operator(name)
            .expect("parser checks declarations")
    }

    fn run_check(&mut self, id: usize, check: &Check) -> std::result::Result<CheckReport, Error> {
        let names = self.file.names.clone();
        let report = |verdict, summary: String, details| CheckReport {
            id,
            check: check.to_string(),
            verdict,
            summary,
            details,
        };
        Ok(match check {
            Check::Bivector(name) | Check::TwoForm(name) => {
                let op = self.operator(name).clone();
                let eq = self.equation()?;
                let (result, what) = if matches!(check, Check::Bivector(_)) {
                    (eq.bivector_residual(&op)?, "bivector")
                } else {
                    (eq.twoform_residual(&op)?, "2-form")
                };
                let verdict = if result.is_structure() {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                };
                let mut summary = if result.residual_vanishes() {
                    format!("{name} is an invariant {what}: residual vanishes")
                } else {
                    format!("residual: {}", result.residual.format(&names))
                };
                let _ = write!(
                    summary,
                    "\nskew-adjoint: {}",
                    if result.skew_adjoint { "yes" } else { "no" }
                );
                if !result.nonzero {
                    summary.push_str("\nnote: the operator is zero");
                }
                report(
                    verdict,
                    summary,
                    Details::Structure {
                        operator: OperatorJson::new(&op, &names),
                        residual: OperatorJson::new(&result.residual, &names),
                        skew_adjoint: result.skew_adjoint,
                        nonzero: result.nonzero,
                    },
                )
            }
            Check::Symmetry(name) | Check::Cosymmetry(name) => {
                let v = self
                    .file
                    .vector(name)
                    .expect("parser checks declarations")
                    .components
                    .clone();
                let eq = self.equation()?;
                let verdict = if matches!(check, Check::Symmetry(_)) {
                    eq.is_symmetry(&v)?
                } else {
                    eq.is_cosymmetry(&v)?
                };
                report(
                    if verdict.holds {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    },
                    section_summary(verdict.holds, &verdict.residual, &names),
                    Details::Section {
                        residual: verdict
                            .residual
                            .iter()
                            .map(|p| PolyJson::new(p, &names))
                            .collect(),
                    },
                )
            }
            Check::Vanishing { k, kind } => {
                let config = SearchConfig {
                    seed: self.options.seed,
                    point_budget: self.options.budget,
                    covector_budget: self.options.budget,
                    alpha_budget: 50,
                    samples: self.options.samples,
                };
                let eq = self.equation()?.clone();
                match certify(&eq, *k, *kind, &config) {
                    Ok(certs) => {
                        let checked: Vec<bool> = certs
                            .iter()
                            .map(|c| verify_certificate(&eq, c).is_ok())
                            .collect();
                        let all_ok = checked.iter().all(|&b| b);
                        let mut summary = format!(
                            "{} certificate(s): every variational {k}-{} has vanishing symbol at all sampled regular points",
                            certs.len(),
                            kind.as_str()
                        );
                        for c in &certs {
                            let point: Vec<String> = c
                                .point
                                .entries()
                                .map(|(v, x)| format!("{} = {}", names.var(v), fmt_rat(x)))
                                .collect();
                            let _ = write!(
                                summary,
                                "\nseed {}: ρ = {{{}}}, v = ({}), α = ({}), det λ(v) = {}, det = {}",
                                c.seed,
                                point.join(", "),
                                c.covector.iter().map(fmt_rat).collect::<Vec<_>>().join(", "),
                                c.alpha.iter().map(fmt_rat).collect::<Vec<_>>().join(", "),
                                fmt_rat(&c.symbol_det),
                                fmt_rat(&c.system_det)
                            );
                        }
                        let certificates = certs
                            .iter()
                            .zip(&checked)
                            .map(|(c, &ok)| CertificateJson::new(c, &names, ok))
                            .collect();
                        if all_ok && *k == 3 {
                            match kind {
                                StructureKind::Vector => self.vector_certificates.extend(certs),
                                StructureKind::Form => self.form_certificates.extend(certs),
                            }
                        }
                        let verdict = if all_ok {
                            Verdict::Pass
                        } else {
                            self.certificate_failures.push(format!(
                                "check {id} ({check}): certificate failed re-verification"
                            ));
                            Verdict::CertificateFailure
                        };
                        report(
                            verdict,
                            summary,
                            Details::Vanishing {
                                k: *k,
                                kind: *kind,
                                certificates,
                                failure: None,
                                message: None,
                            },
                        )
                    }
                    Err(failure) => {
                        let message = failure.to_string();
                        if *k == 3 {
                            self.certificate_failures
                                .push(format!("check {id} ({check}): {message}"));
                        }
                        report(
                            Verdict::CertificateFailure,
                            message.clone(),
                            Details::Vanishing {
                                k: *k,
                                kind: *kind,
                                certificates: Vec::new(),
                                failure: Some(failure),
                                message: Some(message),
                            },
                        )
                    }
                }
            }
            Check::Symbol(name) => {
                let op = self.operator(name);
                let (order, symbol) = symbolic_symbol(op, &names);
                let mut summary = match order {
                    Some(l) => format!("order {l}; λ(θ) = {}", format_text_matrix(&symbol)),
                    None => "zero operator".to_string(),
                };
                let (nondegenerate, regular_point) = if op.is_square() && !op.is_zero() {
                    let mut sampler = Sampler::new(self.options.seed);
                    match find_regular_point_for(op, self.options.budget, &mut sampler) {
                        Ok(rp) => {
                            let _ =
                                write!(summary, "\nnondegenerate: det λ ≠ 0 at a sampled point");
                            (Some(true), Some(point_json(&rp.point, &names)))
                        }
                        Err(e) => {
                            let _ = write!(summary, "\nno nondegenerate point found: {e}");
                            (Some(false), None)
                        }
                    }
                } else {
                    (None, None)
                };
                report(
                    Verdict::Info,
                    summary,
                    Details::Symbol {
                        order,
                        symbol,
                        nondegenerate,
                        regular_point,
                    },
                )
            }
            Check::Adjoint(name) => {
                let op = self.operator(name);
                let adj = op.adjoint();
                let (skew, selfadj) = if op.is_square() {
                    (Some(op.is_skew_adjoint()?), Some(op.is_self_adjoint()?))
                } else {
                    (None, None)
                };
                let mut summary = format!("{name}* = {}", adj.format(&names));
                if let (Some(s), Some(t)) = (skew, selfadj) {
                    let _ = write!(
                        summary,
                        "\nskew-adjoint: {}; self-adjoint: {}",
                        if s { "yes" } else { "no" },
                        if t { "yes" } else { "no" }
                    );
                }
                report(
                    Verdict::Info,
                    summary,
                    Details::Adjoint {
                        adjoint: OperatorJson::new(&adj, &names),
                        skew_adjoint: skew,
                        self_adjoint: selfadj,
                    },
                )
            }
            Check::Compose(a, b) => {
                let result = self.operator(a).compose(self.operator(b))?;
                report(
                    Verdict::Info,
                    format!("{a}∘{b} = {}", result.format(&names)),
                    Details::Compose {
                        result: OperatorJson::new(&result, &names),
                    },
                )
            }
        })
    }

    fn conclusion(&mut self) -> Option<ConclusionReport> {
        let file = self.file;
        let wants = file.checks.iter().any(|c| {
            matches!(
                c,
                Check::Vanishing { k: 3, .. } | Check::Bivector(_) | Check::TwoForm(_)
            )
        });
        if !wants || !file.has_equation() {
            return None;
        }
        let named = |pick: fn(&Check) -> Option<&String>| {
            let mut out: Vec<(String, CDiffOperator)> = Vec::new();
            for c in &file.checks {
                if let Some(name) = pick(c) {
                    if !out.iter().any(|(n, _)| n == name) {
                        out.push((name.clone(), file.operator(name).expect("declared").clone()));
                    }
                }
            }
            out
        };
        let bivectors = named(|c| match c {
            Check::Bivector(n) => Some(n),
            _ => None,
        });
        let two_forms = named(|c| match c {
            Check::TwoForm(n) => Some(n),
            _ => None,
        });
        if self.vector_certificates.is_empty() && self.form_certificates.is_empty() {
            let reason = if self.certificate_failures.is_empty() {
                "no k = 3 vanishing certificate was requested".to_string()
            } else {
                self.certificate_failures.join("; ")
            };
            return Some(ConclusionReport::Withheld { reason });
        }
        let eq = match self.equation() {
            Ok(eq) => eq.clone(),
            Err(e) => {
                return Some(ConclusionReport::Withheld {
                    reason: e.to_string(),
                })
            }
        };
        let bivectors = if self.vector_certificates.is_empty() {
            Vec::new()
        } else {
            bivectors
        };
        let two_forms = if self.form_certificates.is_empty() {
            Vec::new()
        } else {
            two_forms
        };
        match conclude(
            &eq,
            &self.vector_certificates,
            &self.form_certificates,
            &bivectors,
            &two_forms,
        ) {
            Ok(c) => {
                let mut statements = c.statements;
                statements.extend(
                    self.certificate_failures
                        .iter()
                        .map(|f| format!("not established: {f}")),
                );
                Some(ConclusionReport::Established {
                    hamiltonian: c.hamiltonian,
                    compatible_pairs: c.compatible_pairs,
                    symplectic: c.symplectic,
                    statements,
                    scope: c.scope,
                })
            }
            Err(e) => Some(ConclusionReport::Withheld {
                reason: e.to_string(),
            }),
        }
    }
}

fn format_text_matrix(m: &[Vec<String>]) -> String {
    if m.len() == 1 && m[0].len() == 1 {
        return m[0][0].clone();
    }
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

/// Executes the checks in declaration order.
pub fn run(file: &ProblemFile, options: RunOptions) -> Report {
    let names = &file.names;
    let mut runner = Runner {
        file,
        options,
        equation: None,
        vector_certificates: Vec::new(),
        form_certificates: Vec::new(),
        certificate_failures: Vec::new(),
    };
    let checks: Vec<CheckReport> = file
        .checks
        .iter()
        .enumerate()
        .map(|(i, c)| {
            runner
                .run_check(i + 1, c)
                .unwrap_or_else(|e| error_report(i + 1, c, &e))
        })
        .collect();
    let conclusion = runner.conclusion();
    let verdicts: Vec<Verdict> = checks.iter().map(|c| c.verdict).collect();
    let exit_code = if verdicts.contains(&Verdict::Error) {
        EXIT_INVALID
    } else if verdicts.contains(&Verdict::CertificateFailure) {
        EXIT_CERTIFICATE
    } else if verdicts.contains(&Verdict::Fail) {
        EXIT_NEGATIVE
    } else {
        EXIT_PASS
    };
    Report {
        schema: SCHEMA,
        seed: options.seed,
        samples: options.samples,
        budget: options.budget,
        variables: VariablesJson {
            base: (0..names.n).map(|i| names.base(i)).collect(),
            dependent: (0..names.m).map(|j| names.dependent(j)).collect(),
        },
        equation: file
            .equation
            .iter()
            .enumerate()
            .filter_map(|(j, f)| {
                f.as_ref().map(|f| EquationJson {
                    dependent: names.dependent(j),
                    rhs: PolyJson::new(f, names),
                })
            })
            .collect(),
        checks,
        conclusion,
        exit_code,
    }
}
