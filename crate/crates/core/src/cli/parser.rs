use std::fmt::Write as _;

use num_traits::Zero;
use serde::Serialize;

use super::lexer::{parse_error, tokenize, Tok, Token};
use crate::cdiff::{CDiffEntry, CDiffOperator};
use crate::diffpoly::{DiffPoly, JetVar, MultiIndex, Names};
use crate::error::{Error, Result};
use crate::evolution::{EvolutionEquation, StructureKind};
use crate::rational::Rational;

const KEYWORDS: &[&str] = &["vars", "evolve", "operator", "vector", "covector", "check"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorKind {
    Vector,
    Covector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedVector {
    pub name: String,
    pub kind: VectorKind,
    pub components: Vec<DiffPoly>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Bivector(String),
    TwoForm(String),
    Symmetry(String),
    Cosymmetry(String),
    Vanishing { k: usize, kind: StructureKind },
    Symbol(String),
    Adjoint(String),
    Compose(String, String),
}

impl Check {
    pub fn needs_equation(&self) -> bool {
        matches!(
            self,
            Check::Bivector(_)
                | Check::TwoForm(_)
                | Check::Symmetry(_)
                | Check::Cosymmetry(_)
                | Check::Vanishing { .. }
        )
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Check::Bivector(a) => write!(f, "bivector {a}"),
            Check::TwoForm(a) => write!(f, "2form {a}"),
            Check::Symmetry(a) => write!(f, "symmetry {a}"),
            Check::Cosymmetry(a) => write!(f, "cosymmetry {a}"),
            Check::Vanishing { k, kind } => write!(f, "vanishing k={k} {}", kind.as_str()),
            Check::Symbol(a) => write!(f, "symbol {a}"),
            Check::Adjoint(a) => write!(f, "adjoint {a}"),
            Check::Compose(a, b) => write!(f, "compose {a} {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub names: Names,
    /// Right-hand sides `f^j`, one per dependent variable.
    pub equation: Vec<Option<DiffPoly>>,
    pub operators: Vec<(String, CDiffOperator)>,
    pub vectors: Vec<NamedVector>,
    pub checks: Vec<Check>,
}

impl ProblemFile {
    pub fn empty(names: Names) -> Self {
        ProblemFile {
            equation: vec![None; names.m],
            names,
            operators: Vec::new(),
            vectors: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn operator(&self, name: &str) -> Option<&CDiffOperator> {
        self.operators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, op)| op)
    }

    pub fn vector(&self, name: &str) -> Option<&NamedVector> {
        self.vectors.iter().find(|v| v.name == name)
    }

    pub fn has_equation(&self) -> bool {
        self.equation.iter().all(Option::is_some)
    }

    pub fn evolution(&self) -> Result<EvolutionEquation> {
        let rhs = self
            .equation
            .iter()
            .enumerate()
            .map(|(j, f)| {
                f.clone().ok_or_else(|| {
                    Error::Validation(format!("no equation for `{}`", self.names.dependent(j)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        EvolutionEquation::new(self.names.n, self.names.m, rhs)
    }

    /// Canonical text that parses back to an equal value.
    pub fn pretty(&self) -> String {
        let names = &self.names;
        let mut out = String::new();
        let _ = writeln!(out, "vars x[{}], {}[{}]", names.n, names.dep, names.m);
        for (j, f) in self.equation.iter().enumerate() {
            if let Some(f) = f {
                let _ = writeln!(out, "evolve {} = {}", names.dependent(j), names.poly(f));
            }
        }
        for (name, op) in &self.operators {
            let _ = writeln!(
                out,
                "operator {name} = {}",
                format_operator_exact(op, names)
            );
        }
        for v in &self.vectors {
            let keyword = match v.kind {
                VectorKind::Vector => "vector",
                VectorKind::Covector => "covector",
            };
            let _ = writeln!(
                out,
                "{keyword} {} = {}",
                v.name,
                format_vector(&v.components, names)
            );
        }
        for c in &self.checks {
            let _ = writeln!(out, "check {c}");
        }
        out
    }
}

/// Operator text that always reparses to the same shape: 1×1 operators as a
/// bare entry, anything else as a nested list.
pub fn format_operator_exact(op: &CDiffOperator, names: &Names) -> String {
    if op.rows() == 1 && op.cols() == 1 {
        op.entry(0, 0).format(names)
    } else {
        op.format(names)
    }
}

pub fn format_vector(v: &[DiffPoly], names: &Names) -> String {
    if v.len() == 1 {
        names.poly(&v[0])
    } else {
        let parts: Vec<String> = v.iter().map(|p| names.poly(p)).collect();
        format!("[{}]", parts.join(", "))
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: Option<Names>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        &self.toks[(self.pos + offset).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        parse_error(t.line, t.column, message)
    }

    fn expect(&mut self, tok: Tok) -> Result<Token> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.error_here(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().tok.describe()
            )))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Token)> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => Ok((s, self.next())),
            other => Err(self.error_here(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<Token> {
        match &self.peek().tok {
            Tok::Ident(s) if s == word => Ok(self.next()),
            other => Err(self.error_here(format!("expected `{word}`, found {}", other.describe()))),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<u64> {
        match self.peek().tok {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            ref other => {
                Err(self.error_here(format!("expected {what}, found {}", other.describe())))
            }
        }
    }

    fn at_ident(&self, word: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == word)
    }

    fn names(&self) -> &Names {
        self.names
            .as_ref()
            .expect("names set before expressions are parsed")
    }

    fn vars(&mut self) -> Result<Names> {
        self.expect_keyword("vars")?;
        let (base, tok) = self.expect_ident("`x`")?;
        if base != "x" {
            return Err(parse_error(
                tok.line,
                tok.column,
                "base variables must be named `x`",
            ));
        }
        self.expect(Tok::LBracket)?;
        let at = self.peek().clone();
        let n = self.expect_int("number of base variables")?;
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Comma)?;
        let (dep, dep_tok) = self.expect_ident("dependent variable name")?;
        if !dep.chars().all(|c| c.is_ascii_alphabetic())
            || ["x", "t", "D"].contains(&dep.as_str())
            || KEYWORDS.contains(&dep.as_str())
        {
            return Err(parse_error(
                dep_tok.line,
                dep_tok.column,
                format!(
                    "`{dep}` cannot name the dependent variables; use letters other than x, t, D"
                ),
            ));
        }
        self.expect(Tok::LBracket)?;
        let at_m = self.peek().clone();
        let m = self.expect_int("number of dependent variables")?;
        self.expect(Tok::RBracket)?;
        if n == 0 {
            return Err(parse_error(
                at.line,
                at.column,
                "need at least one base variable",
            ));
        }
        if m == 0 {
            return Err(parse_error(
                at_m.line,
                at_m.column,
                "need at least one dependent variable",
            ));
        }
        Ok(Names::new(n as usize, m as usize, dep))
    }

    fn parse_base(&self, s: &str) -> Option<usize> {
        let names = self.names();
        if names.n == 1 {
            (s == "x").then_some(0)
        } else {
            let i: usize = s.strip_prefix('x')?.parse().ok()?;
            if s.starts_with("x0") || i == 0 || i > names.n {
                None
            } else {
                Some(i - 1)
            }
        }
    }

    fn parse_dependent(&self, s: &str) -> Option<usize> {
        let names = self.names();
        if names.m == 1 {
            (s == names.dep).then_some(0)
        } else {
            let rest = s.strip_prefix(names.dep.as_str())?;
            let j: usize = rest.parse().ok()?;
            if rest.starts_with('0') || j == 0 || j > names.m {
                None
            } else {
                Some(j - 1)
            }
        }
    }

    fn parse_subscript(&self, s: &str) -> Option<MultiIndex> {
        let names = self.names();
        let mut exps = vec![0u32; names.n];
        if names.n == 1 {
            if s.is_empty() || !s.chars().all(|c| c == 'x') {
                return None;
            }
            exps[0] = s.len() as u32;
        } else {
            let mut rest = s;
            if rest.is_empty() {
                return None;
            }
            while !rest.is_empty() {
                let tail = rest.strip_prefix('x')?;
                let digits = tail.chars().take_while(char::is_ascii_digit).count();
                if digits == 0 {
                    return None;
                }
                let i = self.parse_base(&rest[..digits + 1])?;
                exps[i] += 1;
                rest = &tail[digits..];
            }
        }
        Some(MultiIndex::new(exps))
    }

    fn resolve(&self, name: &str, tok: &Token, allow_d: bool) -> Result<CDiffEntry> {
        let err = |msg: String| Err(parse_error(tok.line, tok.column, msg));
        if name == "t" {
            return Ok(CDiffEntry::multiplication(crate::diffpoly::var(
                JetVar::Time,
            )));
        }
        if let Some(i) = self.parse_base(name) {
            return Ok(CDiffEntry::multiplication(crate::diffpoly::var(
                JetVar::Base(i),
            )));
        }
        if let Some(j) = self.parse_dependent(name) {
            return Ok(CDiffEntry::multiplication(crate::diffpoly::jet(
                j,
                MultiIndex::empty(),
            )));
        }
        if name == "D" {
            return err("bare `D` is not an operator; write D_x, D_xx, ...".into());
        }
        if let Some((head, sub)) = name.split_once('_') {
            if head == "D" {
                if !allow_d {
                    return err(format!("`{name}` is an operator; total derivatives are only allowed in operator definitions"));
                }
                return match self.parse_subscript(sub) {
                    Some(sigma) => Ok(CDiffEntry::d(sigma)),
                    None => err(format!("bad derivative subscript in `{name}`")),
                };
            }
            if let Some(j) = self.parse_dependent(head) {
                if sub.contains('t') {
                    return err(format!(
                        "`{name}` is a t-derivative; expressions may only contain jets in x"
                    ));
                }
                return match self.parse_subscript(sub) {
                    Some(sigma) => Ok(CDiffEntry::multiplication(crate::diffpoly::jet(j, sigma))),
                    None => err(format!("bad jet subscript in `{name}`")),
                };
            }
        }
        err(format!("undeclared identifier `{name}`"))
    }

    // expr := term (("+" | "-") term)*
    fn expr(&mut self, allow_d: bool) -> Result<CDiffEntry> {
        let mut acc = self.term(allow_d)?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term(allow_d)?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.add(&self.term(allow_d)?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := unary (("*" | "/") unary)*
    fn term(&mut self, allow_d: bool) -> Result<CDiffEntry> {
        let mut acc = self.unary(allow_d)?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    let star = self.next();
                    let rhs = self.unary(allow_d)?;
                    if acc.order().unwrap_or(0) > 0 {
                        return Err(parse_error(
                            star.line,
                            star.column,
                            "D_σ must be the rightmost factor of a product",
                        ));
                    }
                    acc = rhs.premultiply(&acc.coefficient(&MultiIndex::empty()));
                }
                Tok::Slash => {
                    let slash = self.next();
                    let rhs = self.unary(allow_d)?;
                    let divisor = (rhs.order().unwrap_or(0) == 0)
                        .then(|| rhs.coefficient(&MultiIndex::empty()).as_constant())
                        .flatten();
                    match divisor {
                        Some(c) if c.is_zero() => {
                            return Err(parse_error(slash.line, slash.column, "division by zero"));
                        }
                        Some(c) => {
                            let inv = c.recip();
                            acc = acc.map_coefficients(|a| a.scale(&inv));
                        }
                        None => {
                            return Err(parse_error(
                                slash.line,
                                slash.column,
                                "non-polynomial right-hand side: division by a non-constant",
                            ));
                        }
                    }
                }
                _ => return Ok(acc),
            }
        }
    }

    // unary := "-" unary | power
    fn unary(&mut self, allow_d: bool) -> Result<CDiffEntry> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(self.unary(allow_d)?.neg());
        }
        self.power(allow_d)
    }

    // power := atom ("^" int)?
    fn power(&mut self, allow_d: bool) -> Result<CDiffEntry> {
        let at = self.peek().clone();
        let base = self.atom(allow_d)?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.next();
        let e = match self.peek().tok {
            Tok::Int(e) => {
                self.next();
                e
            }
            _ => {
                return Err(parse_error(
                    caret.line,
                    caret.column,
                    "non-polynomial right-hand side: exponents must be non-negative integer literals",
                ));
            }
        };
        if base.order().unwrap_or(0) > 0 {
            return Err(parse_error(
                at.line,
                at.column,
                "powers of D_σ are not supported; write D_xx instead of D_x^2",
            ));
        }
        let e = u32::try_from(e)
            .map_err(|_| parse_error(caret.line, caret.column, "exponent too large"))?;
        Ok(CDiffEntry::multiplication(
            base.coefficient(&MultiIndex::empty()).pow(e),
        ))
    }

    // atom := int | ident | "(" expr ")"
    fn atom(&mut self, allow_d: bool) -> Result<CDiffEntry> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.next();
                let value = Rational::from_integer((*n).into());
                Ok(CDiffEntry::multiplication(DiffPoly::constant(value)))
            }
            Tok::Ident(name) => {
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(
                        self.error_here(format!("expected an expression, found keyword `{name}`"))
                    );
                }
                if *self.peek_at(1) == Tok::LParen {
                    return Err(parse_error(
                        t.line,
                        t.column,
                        format!("non-polynomial right-hand side: function call `{name}(...)`"),
                    ));
                }
                self.next();
                self.resolve(name, &t, allow_d)
            }
            Tok::LParen => {
                self.next();
                let e = self.expr(allow_d)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            other => Err(self.error_here(format!(
                "expected an expression, found {}",
                other.describe()
            ))),
        }
    }

    fn polynomial(&mut self) -> Result<DiffPoly> {
        Ok(self.expr(false)?.coefficient(&MultiIndex::empty()))
    }

    fn operator_value(&mut self) -> Result<CDiffOperator> {
        if self.peek().tok != Tok::LBracket {
            return Ok(CDiffOperator::scalar(self.expr(true)?));
        }
        let open = self.next();
        let mut rows = Vec::new();
        loop {
            self.expect(Tok::LBracket)?;
            let mut row = vec![self.expr(true)?];
            while self.peek().tok == Tok::Comma {
                self.next();
                row.push(self.expr(true)?);
            }
            self.expect(Tok::RBracket)?;
            rows.push(row);
            if self.peek().tok == Tok::Comma {
                self.next();
            } else {
                break;
            }
        }
        self.expect(Tok::RBracket)?;
        let width = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != width) {
            return Err(parse_error(
                open.line,
                open.column,
                format!(
                    "ragged operator matrix: rows of length {width} and {}",
                    bad.len()
                ),
            ));
        }
        CDiffOperator::from_rows(rows)
    }

    fn vector_value(&mut self) -> Result<Vec<DiffPoly>> {
        if self.peek().tok != Tok::LBracket {
            return Ok(vec![self.polynomial()?]);
        }
        self.next();
        let mut v = vec![self.polynomial()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            v.push(self.polynomial()?);
        }
        self.expect(Tok::RBracket)?;
        Ok(v)
    }

    fn fresh_name(&self, file: &ProblemFile, name: &str, tok: &Token) -> Result<()> {
        let clash = file.operator(name).is_some() || file.vector(name).is_some();
        if clash {
            return Err(parse_error(
                tok.line,
                tok.column,
                format!("`{name}` is already defined"),
            ));
        }
        if KEYWORDS.contains(&name) {
            return Err(parse_error(
                tok.line,
                tok.column,
                format!("`{name}` is a keyword"),
            ));
        }
        Ok(())
    }

    fn check(&mut self, file: &ProblemFile) -> Result<Check> {
        let check_tok = self.expect_keyword("check")?;
        let (what, what_tok) = self.expect_ident("a check name")?;
        let operand = |p: &mut Self, want_vector: Option<VectorKind>| -> Result<String> {
            let (name, tok) = p.expect_ident("a name")?;
            let found = match want_vector {
                None => file.operator(&name).is_some(),
                Some(kind) => file.vector(&name).is_some_and(|v| v.kind == kind),
            };
            if !found {
                let what = match want_vector {
                    None => "operator",
                    Some(VectorKind::Vector) => "vector",
                    Some(VectorKind::Covector) => "covector",
                };
                return Err(parse_error(
                    tok.line,
                    tok.column,
                    format!("undeclared {what} `{name}`"),
                ));
            }
            Ok(name)
        };
        let check = match what.as_str() {
            "bivector" => Check::Bivector(operand(self, None)?),
            "2form" => Check::TwoForm(operand(self, None)?),
            "symmetry" => Check::Symmetry(operand(self, Some(VectorKind::Vector))?),
            "cosymmetry" => Check::Cosymmetry(operand(self, Some(VectorKind::Covector))?),
            "symbol" => Check::Symbol(operand(self, None)?),
            "adjoint" => Check::Adjoint(operand(self, None)?),
            "compose" => {
                let a = operand(self, None)?;
                let b = operand(self, None)?;
                Check::Compose(a, b)
            }
            "vanishing" => {
                self.expect_keyword("k")?;
                self.expect(Tok::Equals)?;
                let at = self.peek().clone();
                let k = self.expect_int("the degree k")?;
                if k < 3 {
                    return Err(parse_error(
                        at.line,
                        at.column,
                        format!("vanishing needs k ≥ 3, found {k}"),
                    ));
                }
                let (kind, tok) = self.expect_ident("`vector` or `form`")?;
                let kind = match kind.as_str() {
                    "vector" => StructureKind::Vector,
                    "form" => StructureKind::Form,
                    _ => {
                        return Err(parse_error(
                            tok.line,
                            tok.column,
                            "expected `vector` or `form`",
                        ))
                    }
                };
                Check::Vanishing {
                    k: k as usize,
                    kind,
                }
            }
            other => {
                return Err(parse_error(
                    what_tok.line,
                    what_tok.column,
                    format!("unknown check `{other}`"),
                ));
            }
        };
        if check.needs_equation() && !file.has_equation() {
            return Err(parse_error(
                check_tok.line,
                check_tok.column,
                format!("`check {check}` needs every equation to be declared first"),
            ));
        }
        Ok(check)
    }

    fn file(&mut self) -> Result<ProblemFile> {
        if !self.at_ident("vars") {
            return Err(self.error_here("a problem file must start with `vars x[n], u[m]`"));
        }
        let names = self.vars()?;
        let mut file = ProblemFile::empty(names.clone());
        self.names = Some(names);
        while self.peek().tok != Tok::Eof {
            let (keyword, tok) = self.expect_ident("a declaration")?;
            match keyword.as_str() {
                "evolve" => {
                    let (dep, dep_tok) = self.expect_ident("a dependent variable")?;
                    let Some(j) = self.parse_dependent(&dep) else {
                        return Err(parse_error(
                            dep_tok.line,
                            dep_tok.column,
                            format!("`{dep}` is not a declared dependent variable"),
                        ));
                    };
                    if file.equation[j].is_some() {
                        return Err(parse_error(
                            dep_tok.line,
                            dep_tok.column,
                            format!("equation for `{dep}` declared twice"),
                        ));
                    }
                    self.expect(Tok::Equals)?;
                    file.equation[j] = Some(self.polynomial()?);
                }
                "operator" => {
                    let (name, name_tok) = self.expect_ident("an operator name")?;
                    self.fresh_name(&file, &name, &name_tok)?;
                    self.expect(Tok::Equals)?;
                    let op = self.operator_value()?;
                    file.operators.push((name, op));
                }
                "vector" | "covector" => {
                    let kind = if keyword == "vector" {
                        VectorKind::Vector
                    } else {
                        VectorKind::Covector
                    };
                    let (name, name_tok) = self.expect_ident("a name")?;
                    self.fresh_name(&file, &name, &name_tok)?;
                    self.expect(Tok::Equals)?;
                    let at = self.peek().clone();
                    let components = self.vector_value()?;
                    if components.len() != file.names.m {
                        return Err(parse_error(
                            at.line,
                            at.column,
                            format!(
                                "expected {} components, found {}",
                                file.names.m,
                                components.len()
                            ),
                        ));
                    }
                    file.vectors.push(NamedVector {
                        name,
                        kind,
                        components,
                    });
                }
                "check" => {
                    self.pos -= 1;
                    let c = self.check(&file)?;
                    file.checks.push(c);
                }
                "vars" => {
                    return Err(parse_error(
                        tok.line,
                        tok.column,
                        "`vars` may appear only once",
                    ))
                }
                other => {
                    return Err(parse_error(
                        tok.line,
                        tok.column,
                        format!("unknown declaration `{other}`"),
                    ));
                }
            }
        }
        Ok(file)
    }
}

pub fn parse(text: &str) -> Result<ProblemFile> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        names: None,
    };
    p.file()
}

/// Parses one operator expression (bare entry or nested list).
pub fn parse_operator(text: &str, names: &Names) -> Result<CDiffOperator> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        names: Some(names.clone()),
    };
    let op = p.operator_value()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error_here(format!(
            "unexpected {} after operator",
            p.peek().tok.describe()
        )));
    }
    Ok(op)
}

/// Parses a `vars` declaration on its own.
pub fn parse_vars(text: &str) -> Result<Names> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        names: None,
    };
    let names = p.vars()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error_here(format!(
            "unexpected {} after declaration",
            p.peek().tok.describe()
        )));
    }
    Ok(names)
}

/// Parses one polynomial expression.
pub fn parse_polynomial(text: &str, names: &Names) -> Result<DiffPoly> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        names: Some(names.clone()),
    };
    let e = p.polynomial()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error_here(format!(
            "unexpected {} after expression",
            p.peek().tok.describe()
        )));
    }
    Ok(e)
}
