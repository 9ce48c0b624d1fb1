//! Truncated, finite-type differential graded algebras over F₂.
//!
//! The underlying algebra is the free commutative polynomial algebra on the
//! declared generators modulo a monomial ideal. The differential is given on
//! generators and extended by the Leibniz rule; it raises degree by one.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::{Gf2Matrix, Gf2Vector};

pub type Degree = i32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("first directive must be `dga <name>`")]
    MissingHeader,
    #[error("missing `truncate <N>` directive")]
    MissingTruncation,
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("degree mismatch: d({generator}) must have degree {expected}, but `{monomial}` has degree {found}")]
    DegreeMismatch {
        generator: String,
        monomial: String,
        expected: u32,
        found: u32,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgaError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid presentation: {0}")]
    Invalid(ValidationReport),
    #[error("degree {degree} is outside 0..={truncation}")]
    DegreeOutOfRange { degree: Degree, truncation: u32 },
    #[error("result degree {degree} exceeds truncation {truncation}")]
    TruncationOverflow { degree: Degree, truncation: u32 },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: Degree, right: Degree },
    #[error("polynomial `{0}` is not homogeneous")]
    NotHomogeneous(String),
    #[error("the zero polynomial needs an explicit degree, write `0@<degree>`")]
    ZeroNeedsDegree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: String,
    pub degree: u32,
}

/// Exponent vector indexed by generator declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn unit(generators: usize) -> Self {
        Self {
            exponents: vec![0; generators],
        }
    }

    pub fn generator(generators: usize, index: usize) -> Self {
        let mut m = Self::unit(generators);
        m.exponents[index] = 1;
        m
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }

    fn sort_key(&self) -> Reverse<&[u32]> {
        Reverse(&self.exponents)
    }
}

/// A formal F₂ polynomial: a set of monomials, with repeated terms cancelling.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }
}

impl FromIterator<Monomial> for Polynomial {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for m in iter {
            p.toggle(m);
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgaPresentation {
    name: String,
    truncation: u32,
    generators: Vec<GeneratorDecl>,
    differentials: Vec<Polynomial>,
    relations: Vec<Monomial>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl DgaPresentation {
    pub fn new(name: &str, truncation: u32) -> Self {
        Self {
            name: name.to_string(),
            truncation,
            generators: Vec::new(),
            differentials: Vec::new(),
            relations: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn generators(&self) -> &[GeneratorDecl] {
        &self.generators
    }

    pub fn relations(&self) -> &[Monomial] {
        &self.relations
    }

    pub fn differential_of(&self, index: usize) -> &Polynomial {
        &self.differentials[index]
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn with_truncation(&self, truncation: u32) -> Self {
        Self {
            truncation,
            ..self.clone()
        }
    }

    pub fn add_generator(&mut self, name: &str, degree: u32) -> Result<usize, ParseErrorKind> {
        if !is_identifier(name) {
            return Err(ParseErrorKind::Syntax(format!("`{name}` is not an identifier")));
        }
        if self.generator_index(name).is_some() {
            return Err(ParseErrorKind::DuplicateGenerator(name.to_string()));
        }
        for m in self.relations.iter_mut() {
            m.exponents.push(0);
        }
        for p in self.differentials.iter_mut() {
            *p = p
                .terms()
                .map(|m| {
                    let mut e = m.exponents.clone();
                    e.push(0);
                    Monomial { exponents: e }
                })
                .collect();
        }
        self.generators.push(GeneratorDecl {
            name: name.to_string(),
            degree,
        });
        self.differentials.push(Polynomial::zero());
        Ok(self.generators.len() - 1)
    }

    /// Sets `d(name)`. Degrees are not checked here; see [`validate`].
    pub fn set_differential(&mut self, name: &str, polynomial: &str) -> Result<(), ParseErrorKind> {
        let index = self
            .generator_index(name)
            .ok_or_else(|| ParseErrorKind::UnknownName(name.to_string()))?;
        let p = self.parse_polynomial(polynomial).map_err(|(_, k)| k)?;
        self.differentials[index] = p;
        Ok(())
    }

    pub fn add_relation(&mut self, monomial: &str) -> Result<(), ParseErrorKind> {
        let m = self.parse_monomial(monomial, 0).map_err(|(_, k)| k)?;
        self.relations.push(m);
        Ok(())
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.exponents
            .iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let factors: Vec<String> = m
            .exponents
            .iter()
            .zip(&self.generators)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| {
                if e == 1 {
                    g.name.clone()
                } else {
                    format!("{}^{}", g.name, e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }

    pub fn format_polynomial(&self, p: &Polynomial) -> String {
        let mut terms: Vec<&Monomial> = p.terms().collect();
        terms.sort_by_key(|m| (self.monomial_degree(m), m.sort_key()));
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms
                .iter()
                .map(|m| self.format_monomial(m))
                .collect::<Vec<_>>()
                .join(" + ")
        }
    }

    /// Parses `factor (* factor)*`; `offset` is the column of `text[0]`
    /// (0-based) for error reporting.
    fn parse_monomial(&self, text: &str, offset: usize) -> Result<Monomial, (usize, ParseErrorKind)> {
        let mut m = Monomial::unit(self.generators.len());
        let mut pos = 0;
        for factor in text.split('*') {
            let lead = factor.len() - factor.trim_start().len();
            let col = offset + pos + lead;
            let f = factor.trim();
            pos += factor.len() + 1;
            if f.is_empty() {
                return Err((col, ParseErrorKind::Syntax("empty factor".into())));
            }
            let (name, power) = match f.split_once('^') {
                Some((n, k)) => {
                    let k: u32 = k.trim().parse().map_err(|_| {
                        (col, ParseErrorKind::Syntax(format!("bad exponent in `{f}`")))
                    })?;
                    if k == 0 {
                        return Err((col, ParseErrorKind::Syntax("exponent must be positive".into())));
                    }
                    (n.trim(), k)
                }
                None => (f, 1),
            };
            if !is_identifier(name) {
                return Err((col, ParseErrorKind::Syntax(format!("expected a name, found `{name}`"))));
            }
            let i = self
                .generator_index(name)
                .ok_or_else(|| (col, ParseErrorKind::UnknownName(name.to_string())))?;
            m.exponents[i] += power;
        }
        Ok(m)
    }

    fn parse_polynomial(&self, text: &str) -> Result<Polynomial, (usize, ParseErrorKind)> {
        self.parse_polynomial_at(text, 0)
    }

    fn parse_polynomial_at(&self, text: &str, offset: usize) -> Result<Polynomial, (usize, ParseErrorKind)> {
        if text.trim() == "0" {
            return Ok(Polynomial::zero());
        }
        let mut p = Polynomial::zero();
        let mut pos = 0;
        for term in text.split('+') {
            p.toggle(self.parse_monomial(term, offset + pos)?);
            pos += term.len() + 1;
        }
        Ok(p)
    }
}

impl fmt::Display for DgaPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dga {}", self.name)?;
        writeln!(f, "truncate {}", self.truncation)?;
        for g in &self.generators {
            writeln!(f, "gen {} {}", g.name, g.degree)?;
        }
        for r in &self.relations {
            writeln!(f, "rel {}", self.format_monomial(r))?;
        }
        for (g, p) in self.generators.iter().zip(&self.differentials) {
            if !p.is_zero() {
                writeln!(f, "d {} = {}", g.name, self.format_polynomial(p))?;
            }
        }
        Ok(())
    }
}

impl FromStr for DgaPresentation {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_presentation(s)
    }
}

/// Parses the line-oriented presentation format. Generators may be declared
/// anywhere after the header; names are resolved once all are known.
pub fn parse_presentation(text: &str) -> Result<DgaPresentation, ParseError> {
    let err = |line: usize, column: usize, kind| ParseError {
        line,
        column: column + 1,
        kind,
    };
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if !content.trim().is_empty() {
            lines.push((i + 1, content));
        }
    }

    let mut iter = lines.iter();
    let &(header_line, header) = iter.next().ok_or_else(|| err(1, 0, ParseErrorKind::MissingHeader))?;
    let name = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["dga", name] if is_identifier(name) => name.to_string(),
        _ => return Err(err(header_line, indent(header), ParseErrorKind::MissingHeader)),
    };

    let mut truncation = None;
    let mut p = DgaPresentation::new(&name, 0);
    let mut deferred = Vec::new();
    for &(line, content) in iter {
        let col0 = indent(content);
        let body = content.trim();
        let (keyword, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest_start = col0 + keyword.len() + 1;
        let rest_col = rest_start + indent(rest);
        match keyword {
            "truncate" => {
                if truncation.is_some() {
                    return Err(err(line, col0, ParseErrorKind::Syntax("repeated `truncate`".into())));
                }
                let n: u32 = rest.trim().parse().map_err(|_| {
                    err(line, rest_col, ParseErrorKind::Syntax("`truncate` takes a positive integer".into()))
                })?;
                if n == 0 {
                    return Err(err(line, rest_col, ParseErrorKind::Syntax("truncation must be positive".into())));
                }
                truncation = Some(n);
            }
            "gen" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [gname, deg] = parts.as_slice() else {
                    return Err(err(line, col0, ParseErrorKind::Syntax("expected `gen <name> <degree>`".into())));
                };
                let degree: u32 = deg.parse().map_err(|_| {
                    err(line, col0, ParseErrorKind::Syntax(format!("bad degree `{deg}`")))
                })?;
                if degree == 0 {
                    return Err(err(line, col0, ParseErrorKind::Syntax("generator degree must be at least 1".into())));
                }
                p.add_generator(gname, degree).map_err(|k| err(line, rest_col, k))?;
            }
            "rel" | "d" => deferred.push((line, col0, keyword, rest, rest_start)),
            "dga" => return Err(err(line, col0, ParseErrorKind::Syntax("repeated `dga` header".into()))),
            other => {
                return Err(err(line, col0, ParseErrorKind::Syntax(format!("unknown directive `{other}`"))))
            }
        }
    }
    let truncation = truncation.ok_or_else(|| err(header_line, 0, ParseErrorKind::MissingTruncation))?;
    p.truncation = truncation;

    for (line, col0, keyword, rest, rest_start) in deferred {
        if keyword == "rel" {
            let m = p.parse_monomial(rest, rest_start).map_err(|(c, k)| err(line, c, k))?;
            if p.monomial_degree(&m) > truncation {
                return Err(err(line, rest_start + indent(rest), ParseErrorKind::Invalid(format!(
                    "relation `{}` has degree above the truncation {truncation}", rest.trim()
                ))));
            }
            p.relations.push(m);
            continue;
        }
        let Some((lhs, rhs)) = rest.split_once('=') else {
            return Err(err(line, col0, ParseErrorKind::Syntax("expected `d <name> = <polynomial>`".into())));
        };
        let gname = lhs.trim();
        let index = p
            .generator_index(gname)
            .ok_or_else(|| err(line, rest_start + indent(lhs), ParseErrorKind::UnknownName(gname.to_string())))?;
        let rhs_col = rest_start + lhs.len() + 1;
        let poly = p.parse_polynomial_at(rhs, rhs_col).map_err(|(c, k)| err(line, c, k))?;
        let expected = p.generators[index].degree + 1;
        for m in poly.terms() {
            let found = p.monomial_degree(m);
            if found != expected {
                return Err(err(line, rhs_col + indent(rhs), ParseErrorKind::DegreeMismatch {
                    generator: gname.to_string(),
                    monomial: p.format_monomial(m),
                    expected,
                    found,
                }));
            }
        }
        if !p.differentials[index].is_zero() {
            return Err(err(line, col0, ParseErrorKind::Syntax(format!("d({gname}) given twice"))));
        }
        p.differentials[index] = poly;
    }
    Ok(p)
}

fn indent(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

/// An element of a single degree, in coordinates over the ordered monomial
/// basis of that degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainElement {
    degree: Degree,
    coords: Gf2Vector,
}

impl ChainElement {
    pub fn new(degree: Degree, coords: Gf2Vector) -> Self {
        Self { degree, coords }
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn coords(&self) -> &Gf2Vector {
        &self.coords
    }

    pub fn into_coords(self) -> Gf2Vector {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn add(&self, other: &ChainElement) -> Result<ChainElement, DgaError> {
        if self.degree != other.degree {
            return Err(DgaError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(ChainElement {
            degree: self.degree,
            coords: &self.coords + &other.coords,
        })
    }
}

#[derive(Debug, Clone)]
struct DegreeBasis {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

/// A validated presentation together with its monomial bases and the
/// matrices of `d` in every degree below the truncation.
#[derive(Debug, Clone)]
pub struct Dga {
    presentation: DgaPresentation,
    bases: Vec<DegreeBasis>,
    d_matrices: Vec<Gf2Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    BadGeneratorDegree { generator: String, degree: u32 },
    DuplicateGenerator { generator: String },
    RelationAboveTruncation { relation: String },
    DegreeMismatch { generator: String, monomial: String, expected: u32, found: u32 },
    DifferentialAboveTruncation { generator: String },
    DSquaredNonzero { monomial: String, value: String },
    RelationNotClosed { monomial: String, value: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BadGeneratorDegree { generator, degree } => {
                write!(f, "generator {generator} has degree {degree}, outside 1..=truncation")
            }
            Violation::DuplicateGenerator { generator } => write!(f, "duplicate generator {generator}"),
            Violation::RelationAboveTruncation { relation } => {
                write!(f, "relation {relation} lies above the truncation")
            }
            Violation::DegreeMismatch { generator, monomial, expected, found } => write!(
                f,
                "d({generator}) contains {monomial} of degree {found}, expected {expected}"
            ),
            Violation::DifferentialAboveTruncation { generator } => {
                write!(f, "d({generator}) is nonzero but lies above the truncation")
            }
            Violation::DSquaredNonzero { monomial, value } => {
                write!(f, "d(d({monomial})) = {value}")
            }
            Violation::RelationNotClosed { monomial, value } => {
                write!(f, "d({monomial}) = {value} leaves the relation ideal")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn structural_violations(p: &DgaPresentation) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for g in &p.generators {
        if g.degree == 0 || g.degree > p.truncation {
            out.push(Violation::BadGeneratorDegree {
                generator: g.name.clone(),
                degree: g.degree,
            });
        }
        if !seen.insert(&g.name) {
            out.push(Violation::DuplicateGenerator {
                generator: g.name.clone(),
            });
        }
    }
    for r in &p.relations {
        if p.monomial_degree(r) > p.truncation {
            out.push(Violation::RelationAboveTruncation {
                relation: p.format_monomial(r),
            });
        }
    }
    for (g, poly) in p.generators.iter().zip(&p.differentials) {
        let expected = g.degree + 1;
        for m in poly.terms() {
            let found = p.monomial_degree(m);
            if found != expected {
                out.push(Violation::DegreeMismatch {
                    generator: g.name.clone(),
                    monomial: p.format_monomial(m),
                    expected,
                    found,
                });
            }
        }
        if !poly.is_zero() && expected > p.truncation {
            out.push(Violation::DifferentialAboveTruncation {
                generator: g.name.clone(),
            });
        }
    }
    out
}

/// Checks degree compatibility, `d² = 0` on basis monomials of degree at most
/// `truncation − 2`, and closure of the relation ideal under `d`.
pub fn validate(p: &DgaPresentation) -> ValidationReport {
    let structural = structural_violations(p);
    if !structural.is_empty() {
        return ValidationReport {
            violations: structural,
        };
    }
    let dga = Dga::compile(p.clone());
    let mut violations = Vec::new();
    let n = p.truncation as Degree;
    for deg in 0..=n - 2 {
        let d1 = &dga.d_matrices[deg as usize];
        let d2 = &dga.d_matrices[deg as usize + 1];
        for (j, m) in dga.bases[deg as usize].monomials.iter().enumerate() {
            let dd = d2.mul_vec(d1.column(j)).expect("composable");
            if !dd.is_zero() {
                violations.push(Violation::DSquaredNonzero {
                    monomial: p.format_monomial(m),
                    value: dga.format(&ChainElement::new(deg + 2, dd)),
                });
            }
        }
    }
    let gens = p.generators.len();
    for r in &p.relations {
        let mut multiples = vec![r.clone()];
        multiples.extend((0..gens).map(|i| r.times(&Monomial::generator(gens, i))));
        for m in multiples {
            if p.monomial_degree(&m) + 1 > p.truncation {
                continue;
            }
            let dm = dga.free_differential(&m);
            if dm.terms().any(|t| !dga.in_ideal(t)) {
                violations.push(Violation::RelationNotClosed {
                    monomial: p.format_monomial(&m),
                    value: p.format_polynomial(&dm),
                });
            }
        }
    }
    ValidationReport { violations }
}

fn enumerate_monomials(degrees: &[u32], target: u32) -> Vec<Monomial> {
    fn go(degrees: &[u32], i: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == degrees.len() {
            if remaining == 0 {
                out.push(Monomial::from_exponents(current.clone()));
            }
            return;
        }
        let max = remaining / degrees[i];
        for e in (0..=max).rev() {
            current.push(e);
            go(degrees, i + 1, remaining - e * degrees[i], current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    go(degrees, 0, target, &mut Vec::with_capacity(degrees.len()), &mut out);
    out
}

impl Dga {
    /// Validates and compiles a presentation.
    pub fn new(p: DgaPresentation) -> Result<Dga, DgaError> {
        let report = validate(&p);
        if !report.passed() {
            return Err(DgaError::Invalid(report));
        }
        Ok(Dga::compile(p))
    }

    /// Builds bases and `d` matrices; the presentation must be structurally sound.
    fn compile(p: DgaPresentation) -> Dga {
        let degrees: Vec<u32> = p.generators.iter().map(|g| g.degree).collect();
        let mut dga = Dga {
            bases: Vec::new(),
            d_matrices: Vec::new(),
            presentation: p,
        };
        for deg in 0..=dga.presentation.truncation {
            let mut monomials: Vec<Monomial> = enumerate_monomials(&degrees, deg)
                .into_iter()
                .filter(|m| !dga.in_ideal(m))
                .collect();
            monomials.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
            let index = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            dga.bases.push(DegreeBasis { monomials, index });
        }
        for deg in 0..dga.presentation.truncation as usize {
            let rows = dga.bases[deg + 1].monomials.len();
            let columns = dga.bases[deg]
                .monomials
                .iter()
                .map(|m| dga.project(deg + 1, &dga.free_differential(m)))
                .collect();
            dga.d_matrices
                .push(Gf2Matrix::from_columns(rows, columns).expect("column length matches basis"));
        }
        dga
    }

    fn in_ideal(&self, m: &Monomial) -> bool {
        self.presentation.relations.iter().any(|r| r.divides(m))
    }

    /// Leibniz rule in the free algebra (no relations applied).
    fn free_differential(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, &e) in m.exponents.iter().enumerate() {
            if e % 2 == 0 {
                continue;
            }
            let mut rest = m.clone();
            rest.exponents[i] -= 1;
            for t in self.presentation.differentials[i].terms() {
                out.toggle(rest.times(t));
            }
        }
        out
    }

    /// Image of a polynomial of degree `deg` in the quotient basis.
    fn project(&self, deg: usize, p: &Polynomial) -> Gf2Vector {
        let basis = &self.bases[deg];
        let mut v = Gf2Vector::zeros(basis.monomials.len());
        for m in p.terms() {
            if let Some(&i) = basis.index.get(m) {
                v.flip(i);
            }
        }
        v
    }

    pub fn presentation(&self) -> &DgaPresentation {
        &self.presentation
    }

    pub fn truncation(&self) -> u32 {
        self.presentation.truncation
    }

    fn check_degree(&self, degree: Degree) -> Result<(), DgaError> {
        if degree > self.truncation() as Degree {
            Err(DgaError::DegreeOutOfRange {
                degree,
                truncation: self.truncation(),
            })
        } else {
            Ok(())
        }
    }

    /// Ordered monomial basis; negative degrees have the empty basis.
    pub fn monomial_basis(&self, degree: Degree) -> Result<&[Monomial], DgaError> {
        self.check_degree(degree)?;
        if degree < 0 {
            return Ok(&[]);
        }
        Ok(&self.bases[degree as usize].monomials)
    }

    pub fn dim(&self, degree: Degree) -> Result<usize, DgaError> {
        Ok(self.monomial_basis(degree)?.len())
    }

    pub fn zero(&self, degree: Degree) -> Result<ChainElement, DgaError> {
        Ok(ChainElement::new(degree, Gf2Vector::zeros(self.dim(degree)?)))
    }

    pub fn unit(&self) -> ChainElement {
        ChainElement::new(0, Gf2Vector::unit(1, 0))
    }

    pub fn basis_element(&self, degree: Degree, index: usize) -> Result<ChainElement, DgaError> {
        let n = self.dim(degree)?;
        Ok(ChainElement::new(degree, Gf2Vector::unit(n, index)))
    }

    pub fn monomial_element(&self, m: &Monomial) -> Result<ChainElement, DgaError> {
        let degree = self.presentation.monomial_degree(m) as Degree;
        let mut out = self.zero(degree)?;
        if let Some(&i) = self.bases[degree as usize].index.get(m) {
            out.coords.flip(i);
        }
        Ok(out)
    }

    pub fn generator(&self, name: &str) -> Result<ChainElement, DgaError> {
        let i = self
            .presentation
            .generator_index(name)
            .ok_or_else(|| DgaError::UnknownGenerator(name.to_string()))?;
        self.monomial_element(&Monomial::generator(self.presentation.generators.len(), i))
    }

    /// Parses a homogeneous polynomial; the zero element is written `0@<degree>`.
    pub fn parse_element(&self, text: &str) -> Result<ChainElement, DgaError> {
        let text = text.trim();
        if let Some((zero, deg)) = text.split_once('@') {
            if zero.trim() != "0" {
                return Err(DgaError::Parse(ParseError {
                    line: 1,
                    column: 1,
                    kind: ParseErrorKind::Syntax("only `0` takes an explicit degree".into()),
                }));
            }
            let degree: Degree = deg.trim().parse().map_err(|_| {
                DgaError::Parse(ParseError {
                    line: 1,
                    column: zero.len() + 2,
                    kind: ParseErrorKind::Syntax(format!("bad degree `{deg}`")),
                })
            })?;
            return self.zero(degree);
        }
        let poly = self.presentation.parse_polynomial(text).map_err(|(c, kind)| {
            DgaError::Parse(ParseError {
                line: 1,
                column: c + 1,
                kind,
            })
        })?;
        let mut degrees = poly.terms().map(|m| self.presentation.monomial_degree(m));
        let Some(degree) = degrees.next() else {
            return Err(DgaError::ZeroNeedsDegree);
        };
        if degrees.any(|d| d != degree) {
            return Err(DgaError::NotHomogeneous(text.to_string()));
        }
        let degree = degree as Degree;
        self.check_degree(degree)?;
        Ok(ChainElement::new(degree, self.project(degree as usize, &poly)))
    }

    pub fn format(&self, u: &ChainElement) -> String {
        if u.is_zero() {
            return "0".to_string();
        }
        let basis = &self.bases[u.degree as usize].monomials;
        u.coords
            .ones()
            .map(|i| self.presentation.format_monomial(&basis[i]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Like [`Dga::format`], but writes zero as `0@<degree>` so the text
    /// parses back with [`Dga::parse_element`].
    pub fn format_argument(&self, u: &ChainElement) -> String {
        if u.is_zero() {
            format!("0@{}", u.degree)
        } else {
            self.format(u)
        }
    }

    fn check_element(&self, u: &ChainElement) -> Result<(), DgaError> {
        self.check_degree(u.degree)?;
        let expected = self.dim(u.degree)?;
        if u.coords.len() != expected {
            return Err(DgaError::DegreeMismatch {
                left: u.degree,
                right: u.degree,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, u: &ChainElement, v: &ChainElement) -> Result<ChainElement, DgaError> {
        self.check_element(u)?;
        self.check_element(v)?;
        let degree = u.degree + v.degree;
        if degree > self.truncation() as Degree {
            return Err(DgaError::TruncationOverflow {
                degree,
                truncation: self.truncation(),
            });
        }
        let mut out = self.zero(degree)?;
        if degree < 0 || u.is_zero() || v.is_zero() {
            return Ok(out);
        }
        let left = &self.bases[u.degree as usize].monomials;
        let right = &self.bases[v.degree as usize].monomials;
        let target = &self.bases[degree as usize].index;
        for i in u.coords.ones() {
            for j in v.coords.ones() {
                // monomials divisible by a relation are absent from the index
                if let Some(&k) = target.get(&left[i].times(&right[j])) {
                    out.coords.flip(k);
                }
            }
        }
        Ok(out)
    }

    pub fn differential(&self, u: &ChainElement) -> Result<ChainElement, DgaError> {
        self.check_element(u)?;
        let degree = u.degree + 1;
        if degree > self.truncation() as Degree {
            return Err(DgaError::TruncationOverflow {
                degree,
                truncation: self.truncation(),
            });
        }
        if u.degree < 0 {
            return self.zero(degree);
        }
        let coords = self.d_matrices[u.degree as usize]
            .mul_vec(&u.coords)
            .expect("checked element length");
        Ok(ChainElement::new(degree, coords))
    }

    /// Matrix of `d: Aⁿ → Aⁿ⁺¹`.
    pub fn d_matrix(&self, degree: Degree) -> Result<Gf2Matrix, DgaError> {
        if degree + 1 > self.truncation() as Degree {
            return Err(DgaError::TruncationOverflow {
                degree: degree + 1,
                truncation: self.truncation(),
            });
        }
        if degree < 0 {
            return Ok(Gf2Matrix::zeros(self.dim(degree + 1)?, 0));
        }
        Ok(self.d_matrices[degree as usize].clone())
    }

    /// Matrix of `x ↦ a·x` on `A^source`.
    pub fn multiplication_matrix(&self, a: &ChainElement, source: Degree) -> Result<Gf2Matrix, DgaError> {
        let n = self.dim(source)?;
        let target = a.degree + source;
        if target > self.truncation() as Degree {
            return Err(DgaError::TruncationOverflow {
                degree: target,
                truncation: self.truncation(),
            });
        }
        let columns = (0..n)
            .map(|j| Ok(self.multiply(a, &self.basis_element(source, j)?)?.coords))
            .collect::<Result<Vec<_>, DgaError>>()?;
        Ok(Gf2Matrix::from_columns(self.dim(target)?, columns).expect("product lands in target degree"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# a toy algebra
dga T
truncate 3
gen x 1
gen y 1
gen t 1
d t = x*y
";

    fn toy() -> Dga {
        Dga::new(SMALL.parse().unwrap()).unwrap()
    }

    #[test]
    fn basis_order_and_counts() {
        let dga = toy();
        assert_eq!(dga.dim(0).unwrap(), 1);
        let deg1: Vec<String> = dga
            .monomial_basis(1)
            .unwrap()
            .iter()
            .map(|m| dga.presentation().format_monomial(m))
            .collect();
        assert_eq!(deg1, ["x", "y", "t"]);
        let deg2: Vec<String> = dga
            .monomial_basis(2)
            .unwrap()
            .iter()
            .map(|m| dga.presentation().format_monomial(m))
            .collect();
        assert_eq!(deg2, ["x^2", "x*y", "x*t", "y^2", "y*t", "t^2"]);
        assert!(dga.monomial_basis(4).is_err());
        assert!(dga.monomial_basis(-1).unwrap().is_empty());
    }

    #[test]
    fn relation_kills_square() {
        let p: DgaPresentation = "dga R\ntruncate 3\ngen g 1\nrel g^2\n".parse().unwrap();
        let dga = Dga::new(p).unwrap();
        assert_eq!(dga.dim(2).unwrap(), 0);
        assert_eq!(dga.dim(1).unwrap(), 1);
    }

    #[test]
    fn multiply_and_differential() {
        let dga = toy();
        let x = dga.generator("x").unwrap();
        let y = dga.generator("y").unwrap();
        let t = dga.generator("t").unwrap();
        assert_eq!(dga.multiply(&x, &dga.unit()).unwrap(), x);
        let xy = dga.multiply(&x, &y).unwrap();
        assert_eq!(dga.format(&xy), "x*y");
        assert_eq!(xy, dga.multiply(&y, &x).unwrap());
        assert_eq!(dga.differential(&t).unwrap(), xy);
        let t2 = dga.multiply(&t, &t).unwrap();
        assert!(dga.differential(&t2).unwrap().is_zero());
        let xxx = dga.multiply(&xy, &x).unwrap();
        assert!(matches!(
            dga.multiply(&xxx, &x),
            Err(DgaError::TruncationOverflow { degree: 4, truncation: 3 })
        ));
        assert!(matches!(dga.differential(&xxx), Err(DgaError::TruncationOverflow { .. })));
    }

    #[test]
    fn omitted_differential_is_zero() {
        let p: DgaPresentation = "dga T\ntruncate 3\ngen g 1\n".parse().unwrap();
        assert_eq!(p.generators().len(), 1);
        assert!(p.differential_of(0).is_zero());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = "dga T\ntruncate 3\ngen g 1\nd g = h\n".parse::<DgaPresentation>().unwrap_err();
        assert_eq!(e.line, 4);
        assert_eq!(e.column, 7);
        assert_eq!(e.kind, ParseErrorKind::UnknownName("h".into()));

        let e = "dga T\ngen g 1\n".parse::<DgaPresentation>().unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingTruncation);

        let e = "dga T\ntruncate 3\ngen g 1\ngen g 2\n".parse::<DgaPresentation>().unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateGenerator("g".into()));
        assert_eq!(e.line, 4);

        let e = "dga T\ntruncate 3\ngen g 1\nd g = g\n".parse::<DgaPresentation>().unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::DegreeMismatch { expected: 2, found: 1, .. }));

        let e = "truncate 3\n".parse::<DgaPresentation>().unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingHeader);

        let e = "dga T\ntruncate 3\ngen g 1\nd g = g * * g\n".parse::<DgaPresentation>().unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.line, 4);

        let e = "dga T\ntruncate 3\nfoo\n".parse::<DgaPresentation>().unwrap_err();
        assert_eq!((e.line, e.column), (3, 1));
    }

    #[test]
    fn whitespace_and_comments_are_insignificant() {
        let a: DgaPresentation = "dga T # name\n\n truncate   3\ngen x 1\ngen t 1\nd t=x *x\n".parse().unwrap();
        let b: DgaPresentation = "dga T\ntruncate 3\ngen x 1\ngen t 1\nd t = x^2\n".parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn repeated_terms_cancel() {
        let p: DgaPresentation = "dga T\ntruncate 3\ngen x 1\ngen t 1\nd t = x^2 + x*x\n".parse().unwrap();
        assert!(p.differential_of(1).is_zero());
    }

    #[test]
    fn round_trip_text() {
        let p: DgaPresentation = SMALL.parse().unwrap();
        let again: DgaPresentation = p.to_string().parse().unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn d_squared_failure_reports_witness() {
        let mut p = DgaPresentation::new("Bad", 4);
        p.add_generator("g", 1).unwrap();
        p.add_generator("h", 2).unwrap();
        p.add_generator("k", 3).unwrap();
        p.set_differential("g", "h").unwrap();
        p.set_differential("h", "k").unwrap();
        let report = validate(&p);
        assert!(!report.passed());
        assert!(report.violations.contains(&Violation::DSquaredNonzero {
            monomial: "g".into(),
            value: "k".into()
        }));
        assert!(matches!(Dga::new(p), Err(DgaError::Invalid(_))));
    }

    #[test]
    fn programmatic_degree_mismatch_is_a_violation() {
        let mut p = DgaPresentation::new("Bad", 3);
        p.add_generator("g", 1).unwrap();
        p.set_differential("g", "g").unwrap();
        let report = validate(&p);
        assert!(matches!(report.violations[0], Violation::DegreeMismatch { .. }));
    }

    #[test]
    fn relation_ideal_must_be_closed() {
        let mut p = DgaPresentation::new("Open", 3);
        p.add_generator("x", 1).unwrap();
        p.add_generator("y", 1).unwrap();
        p.add_generator("t", 1).unwrap();
        p.set_differential("t", "x*y").unwrap();
        p.add_relation("t").unwrap();
        let report = validate(&p);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::RelationNotClosed { monomial, .. } if monomial == "t")));
    }

    #[test]
    fn parse_element_forms() {
        let dga = toy();
        let e = dga.parse_element("x*y + t^2").unwrap();
        assert_eq!(e.degree(), 2);
        assert_eq!(dga.format(&e), "x*y + t^2");
        assert!(dga.parse_element("0@2").unwrap().is_zero());
        assert!(matches!(dga.parse_element("0"), Err(DgaError::ZeroNeedsDegree)));
        assert!(matches!(dga.parse_element("x + x*y"), Err(DgaError::NotHomogeneous(_))));
        assert!(matches!(dga.parse_element("q"), Err(DgaError::Parse(_))));
    }

    #[test]
    fn multiplication_matrix_matches_multiply() {
        let dga = toy();
        let x = dga.generator("x").unwrap();
        let m = dga.multiplication_matrix(&x, 1).unwrap();
        for j in 0..dga.dim(1).unwrap() {
            let b = dga.basis_element(1, j).unwrap();
            assert_eq!(m.column(j), dga.multiply(&x, &b).unwrap().coords());
        }
    }
}
