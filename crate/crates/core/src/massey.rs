//! Threefold Massey products, coindeterminacy, and fourfold definedness.
//!
//! Every chain-level choice (lifts of products, the sets of admissible
//! `a12`) is the solution set of a linear system over F₂ in block variables,
//! so each question below is answered by one elimination rather than a search.
//! The only non-linear step is the fourfold value `a0·a13 + a01·a23 + a02·a3`,
//! which is quadratic in the choices and is therefore enumerated.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dga::{ChainElement, Degree, Dga, DgaError};
use crate::gf2::{column_space, solve, Gf2AffineSubspace, Gf2Error, Gf2Matrix, Gf2Subspace, Gf2Vector, QuotientMap};
use crate::homology::{HomologyClass, HomologyError, HomologyStructure};

/// Default cap on free F₂ parameters enumerated by [`fourfold_bracket`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MasseyError {
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Linear(#[from] Gf2Error),
    #[error("bracket undefined at threefold stage: {product} is not a boundary")]
    ProductNotBoundary { product: String },
    #[error("triple bracket {bracket} does not contain zero (representative {representative})")]
    TripleDoesNotContainZero { bracket: String, representative: String },
    #[error("fourfold bracket is not defined: coindeterminacy is {coset}, which excludes zero")]
    FourfoldUndefined { coset: String },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

impl MasseyError {
    /// Stable machine-readable reason code.
    pub fn reason_code(&self) -> &'static str {
        match self {
            MasseyError::Homology(HomologyError::Unavailable { .. })
            | MasseyError::Dga(DgaError::TruncationOverflow { .. })
            | MasseyError::Homology(HomologyError::Dga(DgaError::TruncationOverflow { .. })) => {
                "degree-unavailable"
            }
            MasseyError::Homology(HomologyError::NotACycle { .. }) => "not-a-cycle",
            MasseyError::Homology(_) | MasseyError::Dga(_) | MasseyError::Linear(_) => "algebra-error",
            MasseyError::ProductNotBoundary { .. } => "threefold-undefined",
            MasseyError::TripleDoesNotContainZero { .. } => "triple-excludes-zero",
            MasseyError::FourfoldUndefined { .. } => "fourfold-undefined",
            MasseyError::Inconsistent(_) => "internal-inconsistency",
        }
    }
}

/// A linear system whose unknowns and equations are homogeneous chains of
/// fixed degrees.
struct BlockSystem<'a> {
    dga: &'a Dga,
    vars: Vec<(Degree, usize)>,
    eqs: Vec<(Degree, Gf2Vector)>,
    terms: Vec<(usize, usize, Gf2Matrix)>,
}

struct BlockSolution {
    vars: Vec<(Degree, usize)>,
    offsets: Vec<usize>,
    particular: Gf2Vector,
    kernel: Gf2Subspace,
}

impl<'a> BlockSystem<'a> {
    fn new(dga: &'a Dga) -> Self {
        Self {
            dga,
            vars: Vec::new(),
            eqs: Vec::new(),
            terms: Vec::new(),
        }
    }

    fn var(&mut self, degree: Degree) -> Result<usize, MasseyError> {
        self.vars.push((degree, self.dga.dim(degree)?));
        Ok(self.vars.len() - 1)
    }

    fn equation(&mut self, rhs: &ChainElement) -> usize {
        self.eqs.push((rhs.degree(), rhs.coords().clone()));
        self.eqs.len() - 1
    }

    /// Adds `d(var)` to equation `eq`.
    fn differential(&mut self, eq: usize, var: usize) -> Result<(), MasseyError> {
        let m = self.dga.d_matrix(self.vars[var].0)?;
        self.terms.push((eq, var, m));
        Ok(())
    }

    /// Adds `factor · var` to equation `eq`.
    fn product(&mut self, eq: usize, var: usize, factor: &ChainElement) -> Result<(), MasseyError> {
        let m = self.dga.multiplication_matrix(factor, self.vars[var].0)?;
        self.terms.push((eq, var, m));
        Ok(())
    }

    fn solve(&self) -> Result<Option<BlockSolution>, MasseyError> {
        let mut eq_offsets = Vec::new();
        let mut rows = 0;
        for (_, rhs) in &self.eqs {
            eq_offsets.push(rows);
            rows += rhs.len();
        }
        let mut offsets = Vec::new();
        let mut columns = Vec::new();
        let mut total = 0;
        for (v, &(_, dim)) in self.vars.iter().enumerate() {
            offsets.push(total);
            total += dim;
            for j in 0..dim {
                let mut col = Gf2Vector::zeros(rows);
                for (eq, var, m) in &self.terms {
                    if *var != v {
                        continue;
                    }
                    if m.rows() != self.eqs[*eq].1.len() {
                        return Err(MasseyError::Inconsistent("block shape mismatch".into()));
                    }
                    for i in m.column(j).ones() {
                        col.flip(eq_offsets[*eq] + i);
                    }
                }
                columns.push(col);
            }
        }
        let matrix = Gf2Matrix::from_columns(rows, columns)?;
        let rhs = Gf2Vector::concat(self.eqs.iter().map(|(_, r)| r));
        Ok(solve(&matrix, &rhs)?.map(|s| BlockSolution {
            vars: self.vars.clone(),
            offsets,
            particular: s.particular,
            kernel: s.kernel,
        }))
    }
}

impl BlockSolution {
    fn block(&self, v: &Gf2Vector, var: usize) -> ChainElement {
        let (degree, dim) = self.vars[var];
        ChainElement::new(degree, v.slice(self.offsets[var], dim))
    }

    fn particular(&self, var: usize) -> ChainElement {
        self.block(&self.particular, var)
    }

    fn concat_blocks(&self, v: &Gf2Vector, vars: &[usize]) -> Gf2Vector {
        let parts: Vec<Gf2Vector> = vars.iter().map(|&i| self.block(v, i).into_coords()).collect();
        Gf2Vector::concat(&parts)
    }

    /// Projection of the solution set onto the listed blocks.
    fn project(&self, vars: &[usize]) -> Gf2AffineSubspace {
        let dim = vars.iter().map(|&i| self.vars[i].1).sum();
        let direction = Gf2Subspace::from_spanning(
            dim,
            self.kernel.basis().iter().map(|b| self.concat_blocks(b, vars)),
        )
        .expect("projected blocks have the summed dimension");
        Gf2AffineSubspace::new(self.concat_blocks(&self.particular, vars), direction)
            .expect("same dimension")
    }
}

/// Some `u` with `d(u) = target`, free variables zero.
fn lift(dga: &Dga, target: &ChainElement) -> Result<Option<ChainElement>, MasseyError> {
    let degree = target.degree() - 1;
    let m = dga.d_matrix(degree)?;
    Ok(solve(&m, target.coords())?.map(|s| ChainElement::new(degree, s.particular)))
}

fn lift_product(
    h: &HomologyStructure,
    a: &ChainElement,
    b: &ChainElement,
) -> Result<ChainElement, MasseyError> {
    let dga = h.dga();
    let ab = dga.multiply(a, b)?;
    lift(dga, &ab)?.ok_or_else(|| MasseyError::ProductNotBoundary {
        product: format!("({})·({}) = {}", dga.format(a), dga.format(b), dga.format(&ab)),
    })
}

fn require_available(h: &HomologyStructure, degree: Degree) -> Result<(), MasseyError> {
    h.degree(degree)?;
    Ok(())
}

/// `⟨s0, s1, s2⟩` with its indeterminacy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleBracket {
    pub inputs: [HomologyClass; 3],
    pub degree: Degree,
    pub value: Gf2AffineSubspace,
    pub strictly_zero: bool,
    /// `(a01, a12)` realizing the canonical representative.
    pub witness: (ChainElement, ChainElement),
}

impl TripleBracket {
    pub fn contains_zero(&self) -> bool {
        self.value.contains_zero()
    }

    pub fn indeterminacy(&self) -> &Gf2Subspace {
        self.value.direction()
    }
}

pub fn triple_bracket(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
) -> Result<TripleBracket, MasseyError> {
    let dga = h.dga();
    let (a0, a1, a2) = (s0.representative(), s1.representative(), s2.representative());
    let degree = s0.degree() + s1.degree() + s2.degree() - 1;
    require_available(h, degree)?;
    let a01 = lift_product(h, a0, a1)?;
    let a12 = lift_product(h, a1, a2)?;
    let rep = dga.multiply(a0, &a12)?.add(&dga.multiply(&a01, a2)?)?;
    let rep = h.class_of(&rep)?;
    let left = h.left_multiplication(s0, a12.degree())?;
    let right = h.right_multiplication(s2, a01.degree())?;
    let direction = column_space(&left).sum(&column_space(&right))?;
    let value = Gf2AffineSubspace::new(rep.coords().clone(), direction)?;
    Ok(TripleBracket {
        inputs: [s0.clone(), s1.clone(), s2.clone()],
        degree,
        strictly_zero: value.is_zero_point(),
        value,
        witness: (a01, a12),
    })
}

/// `(ā \\ b̄)` in `H^degree`: classes `x̄` with `ā·x̄ = z̄·b̄` for some `z̄`.
pub fn left_div_subgroup(
    h: &HomologyStructure,
    a: &HomologyClass,
    b: &HomologyClass,
    degree: Degree,
) -> Result<Gf2Subspace, MasseyError> {
    let target = degree + a.degree();
    let z_degree = target - b.degree();
    let times_a = h.left_multiplication(a, degree)?;
    let times_b = h.right_multiplication(b, z_degree)?;
    Ok(times_a.preimage(&column_space(&times_b))?)
}

/// `(ā // b̄)` in `H^degree`: classes `x̄` with `ā·z̄ = x̄·b̄` for some `z̄`.
pub fn right_div_subgroup(
    h: &HomologyStructure,
    a: &HomologyClass,
    b: &HomologyClass,
    degree: Degree,
) -> Result<Gf2Subspace, MasseyError> {
    let target = degree + b.degree();
    let z_degree = target - a.degree();
    let times_b = h.right_multiplication(b, degree)?;
    let times_a = h.left_multiplication(a, z_degree)?;
    Ok(times_b.preimage(&column_space(&times_a))?)
}

/// Chain-level choices `a01, a12, a23, a02, a13` making the fourfold bracket
/// defined, with `a12` the common element `x = y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningSystem {
    pub a01: ChainElement,
    pub a12: ChainElement,
    pub a23: ChainElement,
    pub a02: ChainElement,
    pub a13: ChainElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoindetResult {
    pub inputs: [HomologyClass; 4],
    /// Degree of `a12`, where the coindeterminacy lives.
    pub degree: Degree,
    pub coset: Gf2AffineSubspace,
    pub contains_zero: bool,
    /// Admissible `x` (chain level), i.e. lifts of `a1·a2` giving zero in `⟨s0,s1,s2⟩`.
    pub left_lifts: Gf2AffineSubspace,
    /// Admissible `y`, giving zero in `⟨s1,s2,s3⟩`.
    pub right_lifts: Gf2AffineSubspace,
    /// Canonical `(x, z)` with `a0·x + z·a2` a boundary.
    pub witness_xz: (ChainElement, ChainElement),
    /// Canonical `(y, w)` with `a1·w + y·a3` a boundary.
    pub witness_yw: (ChainElement, ChainElement),
    /// Present exactly when zero lies in the coset.
    pub common: Option<DefiningSystem>,
}

struct Reps<'a> {
    a0: &'a ChainElement,
    a1: &'a ChainElement,
    a2: &'a ChainElement,
    a3: &'a ChainElement,
}

impl<'a> Reps<'a> {
    fn new(s: [&'a HomologyClass; 4]) -> Self {
        Self {
            a0: s[0].representative(),
            a1: s[1].representative(),
            a2: s[2].representative(),
            a3: s[3].representative(),
        }
    }
}

fn bracket_name(h: &HomologyStructure, s: &[&HomologyClass]) -> String {
    let parts: Vec<String> = s.iter().map(|c| h.dga().format(c.representative())).collect();
    format!("<{}>", parts.join(", "))
}

fn check_triples_contain_zero(h: &HomologyStructure, s: [&HomologyClass; 4]) -> Result<(TripleBracket, TripleBracket), MasseyError> {
    let left = triple_bracket(h, s[0], s[1], s[2])?;
    let right = triple_bracket(h, s[1], s[2], s[3])?;
    for (t, names) in [(&left, [s[0], s[1], s[2]]), (&right, [s[1], s[2], s[3]])] {
        if !t.contains_zero() {
            let rep = h.class_from_coords(t.degree, t.value.representative())?;
            return Err(MasseyError::TripleDoesNotContainZero {
                bracket: bracket_name(h, &names),
                representative: h.format_class(&rep),
            });
        }
    }
    Ok((left, right))
}

/// Unknowns `(x, z, u)`: `d x = a1a2`, `d z = a0a1`, `a0·x + z·a2 + d u = 0`.
fn left_system<'a>(h: &'a HomologyStructure, r: &Reps<'_>) -> Result<BlockSystem<'a>, MasseyError> {
    let dga = h.dga();
    let mut sys = BlockSystem::new(dga);
    let a1a2 = dga.multiply(r.a1, r.a2)?;
    let a0a1 = dga.multiply(r.a0, r.a1)?;
    let x = sys.var(a1a2.degree() - 1)?;
    let z = sys.var(a0a1.degree() - 1)?;
    let u = sys.var(a0a1.degree() + r.a2.degree() - 2)?;
    let e1 = sys.equation(&a1a2);
    sys.differential(e1, x)?;
    let e2 = sys.equation(&a0a1);
    sys.differential(e2, z)?;
    let e3 = sys.equation(&dga.zero(a0a1.degree() + r.a2.degree() - 1)?);
    sys.product(e3, x, r.a0)?;
    sys.product(e3, z, r.a2)?;
    sys.differential(e3, u)?;
    Ok(sys)
}

/// Unknowns `(y, w, v)`: `d y = a1a2`, `d w = a2a3`, `a1·w + y·a3 + d v = 0`.
fn right_system<'a>(h: &'a HomologyStructure, r: &Reps<'_>) -> Result<BlockSystem<'a>, MasseyError> {
    let dga = h.dga();
    let mut sys = BlockSystem::new(dga);
    let a1a2 = dga.multiply(r.a1, r.a2)?;
    let a2a3 = dga.multiply(r.a2, r.a3)?;
    let y = sys.var(a1a2.degree() - 1)?;
    let w = sys.var(a2a3.degree() - 1)?;
    let v = sys.var(a1a2.degree() + r.a3.degree() - 2)?;
    let e1 = sys.equation(&a1a2);
    sys.differential(e1, y)?;
    let e2 = sys.equation(&a2a3);
    sys.differential(e2, w)?;
    let e3 = sys.equation(&dga.zero(a1a2.degree() + r.a3.degree() - 1)?);
    sys.product(e3, w, r.a1)?;
    sys.product(e3, y, r.a3)?;
    sys.differential(e3, v)?;
    Ok(sys)
}

/// Unknowns `(a01, a12, a23, a02, a13)` of a full defining system.
fn defining_system<'a>(h: &'a HomologyStructure, r: &Reps<'_>) -> Result<BlockSystem<'a>, MasseyError> {
    let dga = h.dga();
    let mut sys = BlockSystem::new(dga);
    let a0a1 = dga.multiply(r.a0, r.a1)?;
    let a1a2 = dga.multiply(r.a1, r.a2)?;
    let a2a3 = dga.multiply(r.a2, r.a3)?;
    let a01 = sys.var(a0a1.degree() - 1)?;
    let a12 = sys.var(a1a2.degree() - 1)?;
    let a23 = sys.var(a2a3.degree() - 1)?;
    let a02 = sys.var(a0a1.degree() + r.a2.degree() - 2)?;
    let a13 = sys.var(a1a2.degree() + r.a3.degree() - 2)?;
    for (target, var) in [(&a0a1, a01), (&a1a2, a12), (&a2a3, a23)] {
        let e = sys.equation(target);
        sys.differential(e, var)?;
    }
    let e = sys.equation(&dga.zero(a0a1.degree() + r.a2.degree() - 1)?);
    sys.differential(e, a02)?;
    sys.product(e, a12, r.a0)?;
    sys.product(e, a01, r.a2)?;
    let e = sys.equation(&dga.zero(a1a2.degree() + r.a3.degree() - 1)?);
    sys.differential(e, a13)?;
    sys.product(e, a23, r.a1)?;
    sys.product(e, a12, r.a3)?;
    Ok(sys)
}

const A01: usize = 0;
const A12: usize = 1;
const A23: usize = 2;
const A02: usize = 3;
const A13: usize = 4;

fn defining_from(sol: &BlockSolution, v: &Gf2Vector) -> DefiningSystem {
    DefiningSystem {
        a01: sol.block(v, A01),
        a12: sol.block(v, A12),
        a23: sol.block(v, A23),
        a02: sol.block(v, A02),
        a13: sol.block(v, A13),
    }
}

/// The coindeterminacy of `⟨s0,s1,s2⟩` and `⟨s1,s2,s3⟩`: all classes `x̄ + ȳ`
/// over admissible lifts `x`, `y` of `a1·a2`.
pub fn coindeterminacy(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
    s3: &HomologyClass,
) -> Result<CoindetResult, MasseyError> {
    let s = [s0, s1, s2, s3];
    check_triples_contain_zero(h, s)?;
    let r = Reps::new(s);

    let left = left_system(h, &r)?
        .solve()?
        .ok_or_else(|| MasseyError::Inconsistent("left bracket contains zero but has no admissible lift".into()))?;
    let right = right_system(h, &r)?
        .solve()?
        .ok_or_else(|| MasseyError::Inconsistent("right bracket contains zero but has no admissible lift".into()))?;
    let left_lifts = left.project(&[0]);
    let right_lifts = right.project(&[0]);
    let degree = s1.degree() + s2.degree() - 1;

    let rep_chain = ChainElement::new(degree, left_lifts.representative() + right_lifts.representative());
    let rep = h.class_of(&rep_chain)?;
    let lifts_direction = left_lifts.direction().sum(right_lifts.direction())?;
    let direction = h.classes_of_subspace(degree, &lifts_direction)?;
    let coset = Gf2AffineSubspace::new(rep.coords().clone(), direction)?;

    let common = defining_system(h, &r)?
        .solve()?
        .map(|sol| defining_from(&sol, &sol.particular));
    if common.is_some() != coset.contains_zero() {
        return Err(MasseyError::Inconsistent(format!(
            "joint solvability {} disagrees with zero membership {}",
            common.is_some(),
            coset.contains_zero()
        )));
    }
    Ok(CoindetResult {
        inputs: [s0.clone(), s1.clone(), s2.clone(), s3.clone()],
        degree,
        contains_zero: coset.contains_zero(),
        coset,
        left_lifts,
        right_lifts,
        witness_xz: (left.particular(0), left.particular(1)),
        witness_yw: (right.particular(0), right.particular(1)),
        common,
    })
}

/// Whether `⟨s0,s1,s2,s3⟩` is defined, decided by zero membership in the
/// coindeterminacy. The result carries a common lift when it is.
pub fn is_fourfold_defined(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
    s3: &HomologyClass,
) -> Result<(bool, CoindetResult), MasseyError> {
    let c = coindeterminacy(h, s0, s1, s2, s3)?;
    Ok((c.contains_zero, c))
}

/// True when either threefold sub-bracket is strictly zero, which forces the
/// fourfold bracket to be defined.
pub fn half_strict_defined(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
    s3: &HomologyClass,
) -> Result<bool, MasseyError> {
    let (left, right) = check_triples_contain_zero(h, [s0, s1, s2, s3])?;
    let strict = left.strictly_zero || right.strictly_zero;
    if strict {
        let (defined, _) = is_fourfold_defined(h, s0, s1, s2, s3)?;
        if !defined {
            return Err(MasseyError::Inconsistent(
                "a strictly zero sub-bracket did not make the fourfold bracket defined".into(),
            ));
        }
    }
    Ok(strict)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourfoldBracket {
    pub inputs: [HomologyClass; 4],
    pub degree: Degree,
    pub defined: bool,
    pub coindeterminacy: CoindetResult,
    /// Defining system used for the representative.
    pub witness: DefiningSystem,
    /// Class of `a0·a13 + a01·a23 + a02·a3` for the witness.
    pub representative: Gf2Vector,
    /// Changes reached by varying `a02` and `a13` alone: `H·s3 + s0·H`.
    pub linear_part: Gf2Subspace,
    /// Number of F₂ parameters left after removing `a02`/`a13` variation and
    /// boundary changes in `a01, a12, a23`.
    pub free_parameters: usize,
    pub enumeration_truncated: bool,
    /// Distinct values modulo `linear_part`, canonical and sorted; the value
    /// set is the union of these cosets. Only the representative's coset when
    /// truncated.
    pub cosets: Vec<Gf2Vector>,
}

impl FourfoldBracket {
    /// Every value, or `None` when enumeration was truncated.
    pub fn values(&self) -> Option<BTreeSet<Gf2Vector>> {
        if self.enumeration_truncated {
            return None;
        }
        let mut out = BTreeSet::new();
        for c in &self.cosets {
            for d in self.linear_part.elements() {
                out.insert(&d + c);
            }
        }
        Some(out)
    }

    /// Exact membership when enumerated; when truncated, `Some(true)` only for
    /// members of the known lower bound and `None` otherwise.
    pub fn contains(&self, coords: &Gf2Vector) -> Result<Option<bool>, Gf2Error> {
        let reduced = self.linear_part.reduce(coords)?;
        let hit = self.cosets.binary_search(&reduced).is_ok();
        Ok(if hit || !self.enumeration_truncated { Some(hit) } else { None })
    }

    pub fn is_coset(&self) -> bool {
        !self.enumeration_truncated && self.cosets.len() == 1
    }
}

/// Enumerates `⟨s0,s1,s2,s3⟩` over every defining system.
///
/// Changing `a02`/`a13` by cycles moves the value inside `linear_part`, and
/// changing `a01`, `a12`, `a23` by boundaries (with matching `a02`, `a13`)
/// moves it by a boundary plus an element of `linear_part`. What remains is
/// parameterized by a complement of those boundaries inside the admissible
/// `(a01, a12, a23)`, which is enumerated exhaustively when its dimension is
/// at most `enumeration_limit`.
pub fn fourfold_bracket(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
    s3: &HomologyClass,
    enumeration_limit: usize,
) -> Result<FourfoldBracket, MasseyError> {
    let dga = h.dga();
    let degree = s0.degree() + s1.degree() + s2.degree() + s3.degree() - 2;
    require_available(h, degree)?;
    let (defined, coindet) = is_fourfold_defined(h, s0, s1, s2, s3)?;
    if !defined {
        return Err(MasseyError::FourfoldUndefined {
            coset: format_coset(h, &coindet),
        });
    }
    let r = Reps::new([s0, s1, s2, s3]);
    let sol = defining_system(h, &r)?
        .solve()?
        .ok_or_else(|| MasseyError::Inconsistent("defined bracket without a defining system".into()))?;

    let value_of = |v: &Gf2Vector| -> Result<(DefiningSystem, Gf2Vector), MasseyError> {
        let ds = defining_from(&sol, v);
        let f = dga
            .multiply(r.a0, &ds.a13)?
            .add(&dga.multiply(&ds.a01, &ds.a23)?)?
            .add(&dga.multiply(&ds.a02, r.a3)?)?;
        let coords = h.class_of(&f)?.coords().clone();
        Ok((ds, coords))
    };

    let left = h.left_multiplication(s0, sol.vars[A13].0)?;
    let right = h.right_multiplication(s3, sol.vars[A02].0)?;
    let linear_part = column_space(&left).sum(&column_space(&right))?;

    // Admissible (a01, a12, a23) directions modulo boundaries.
    let lower = [A01, A12, A23];
    let projected = sol.project(&lower);
    let boundary_parts = lower
        .iter()
        .map(|&i| {
            let (deg, dim) = sol.vars[i];
            if deg < 0 {
                Ok(Gf2Subspace::zero(dim))
            } else {
                Ok(h.degree(deg)?.boundaries().clone())
            }
        })
        .collect::<Result<Vec<_>, MasseyError>>()?;
    let boundaries = block_sum(&boundary_parts);
    let complement = QuotientMap::new(projected.direction(), &boundaries)
        .map_err(|_| MasseyError::Inconsistent("boundary changes are not admissible".into()))?;
    let free_parameters = complement.dim();

    let (witness, representative) = value_of(&sol.particular)?;
    let rep_reduced = linear_part.reduce(&representative)?;
    if free_parameters > enumeration_limit {
        return Ok(FourfoldBracket {
            inputs: [s0.clone(), s1.clone(), s2.clone(), s3.clone()],
            degree,
            defined,
            coindeterminacy: coindet,
            witness,
            representative,
            linear_part,
            free_parameters,
            enumeration_truncated: true,
            cosets: vec![rep_reduced],
        });
    }

    // Lift each complement vector to a full kernel element.
    let kernel_projection = Gf2Matrix::from_columns(
        boundaries.ambient_dim(),
        sol.kernel.basis().iter().map(|b| sol.concat_blocks(b, &lower)).collect(),
    )?;
    let steps = complement
        .complement()
        .iter()
        .map(|c| {
            let coeffs = solve(&kernel_projection, c)?
                .ok_or_else(|| MasseyError::Inconsistent("complement vector not admissible".into()))?
                .particular;
            let mut step = Gf2Vector::zeros(sol.particular.len());
            for k in coeffs.ones() {
                step += &sol.kernel.basis()[k];
            }
            Ok(step)
        })
        .collect::<Result<Vec<_>, MasseyError>>()?;

    let mut seen = BTreeSet::new();
    let mut point = sol.particular.clone();
    let count = 1u64 << free_parameters;
    for i in 0..count {
        if i > 0 {
            point += &steps[i.trailing_zeros() as usize];
        }
        let (_, value) = value_of(&point)?;
        seen.insert(linear_part.reduce(&value)?);
    }
    Ok(FourfoldBracket {
        inputs: [s0.clone(), s1.clone(), s2.clone(), s3.clone()],
        degree,
        defined,
        coindeterminacy: coindet,
        witness,
        representative,
        linear_part,
        free_parameters,
        enumeration_truncated: false,
        cosets: seen.into_iter().collect(),
    })
}

fn block_sum(parts: &[Gf2Subspace]) -> Gf2Subspace {
    let total = parts.iter().map(Gf2Subspace::ambient_dim).sum();
    let mut offset = 0;
    let mut vectors = Vec::new();
    for p in parts {
        for b in p.basis() {
            vectors.push(Gf2Vector::from_indices(total, b.ones().map(|i| i + offset)));
        }
        offset += p.ambient_dim();
    }
    Gf2Subspace::from_spanning(total, vectors).expect("shifted into the total space")
}

pub fn format_coset(h: &HomologyStructure, c: &CoindetResult) -> String {
    let rep = h
        .class_from_coords(c.degree, c.coset.representative())
        .map(|x| h.format_class(&x))
        .unwrap_or_else(|_| "?".into());
    let dir: Vec<String> = c
        .coset
        .direction()
        .basis()
        .iter()
        .filter_map(|b| h.class_from_coords(c.degree, b).ok())
        .map(|x| h.format_class(&x))
        .collect();
    format!("{rep} + span{{{}}}", dir.join(", "))
}

/// Outcome of checking that the coindeterminacy does not depend on choices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellDefinednessReport {
    pub trials: usize,
    pub sums_are_cycles: bool,
    pub boundary_shift_admissible: bool,
    pub representative_independent: bool,
    pub failures: Vec<String>,
}

impl WellDefinednessReport {
    pub fn passed(&self) -> bool {
        self.sums_are_cycles && self.boundary_shift_admissible && self.representative_independent
    }
}

fn random_point(rng: &mut impl Rng, a: &Gf2AffineSubspace) -> Gf2Vector {
    let mut v = a.representative().clone();
    for b in a.direction().basis() {
        if rng.gen_bool(0.5) {
            v += b;
        }
    }
    v
}

fn random_boundary(rng: &mut impl Rng, h: &HomologyStructure, degree: Degree) -> Result<Gf2Vector, MasseyError> {
    let dh = h.degree(degree)?;
    Ok(random_point(rng, &Gf2AffineSubspace::new(Gf2Vector::zeros(dh.cycles().ambient_dim()), dh.boundaries().clone())?))
}

/// Whether some `(z, u)` makes `a0·x + z·a2 = d u` with `d z = a0·a1`.
fn admissible_left(h: &HomologyStructure, r: &Reps<'_>, x: &ChainElement) -> Result<bool, MasseyError> {
    let dga = h.dga();
    let mut sys = BlockSystem::new(dga);
    let a0a1 = dga.multiply(r.a0, r.a1)?;
    let z = sys.var(a0a1.degree() - 1)?;
    let u = sys.var(a0a1.degree() + r.a2.degree() - 2)?;
    let e1 = sys.equation(&a0a1);
    sys.differential(e1, z)?;
    let e2 = sys.equation(&dga.multiply(r.a0, x)?);
    sys.product(e2, z, r.a2)?;
    sys.differential(e2, u)?;
    let d_ok = dga.differential(x)? == dga.multiply(r.a1, r.a2)?;
    Ok(d_ok && sys.solve()?.is_some())
}

/// Randomized check of the three well-definedness properties: `x + y` is a
/// cycle; `x + b` stays admissible for boundaries `b`; and replacing each
/// representative by a homologous cycle leaves the coset unchanged.
pub fn coindet_well_definedness_check(
    h: &HomologyStructure,
    s: [&HomologyClass; 4],
    trials: usize,
    seed: u64,
) -> Result<WellDefinednessReport, MasseyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = coindeterminacy(h, s[0], s[1], s[2], s[3])?;
    let r = Reps::new(s);
    let mut report = WellDefinednessReport {
        trials,
        sums_are_cycles: true,
        boundary_shift_admissible: true,
        representative_independent: true,
        failures: Vec::new(),
    };
    let dga = h.dga();
    for t in 0..trials {
        let x = ChainElement::new(base.degree, random_point(&mut rng, &base.left_lifts));
        let y = ChainElement::new(base.degree, random_point(&mut rng, &base.right_lifts));
        let sum = x.add(&y)?;
        if !h.is_cycle(&sum)? {
            report.sums_are_cycles = false;
            report.failures.push(format!("trial {t}: x + y = {} is not a cycle", dga.format(&sum)));
        }

        let b = ChainElement::new(base.degree, random_boundary(&mut rng, h, base.degree)?);
        let shifted = x.add(&b)?;
        if !admissible_left(h, &r, &shifted)? || !base.left_lifts.contains(shifted.coords())? {
            report.boundary_shift_admissible = false;
            report
                .failures
                .push(format!("trial {t}: x + b = {} is not admissible", dga.format(&shifted)));
        }

        let mut moved = Vec::new();
        for c in s {
            let b = ChainElement::new(c.degree(), random_boundary(&mut rng, h, c.degree())?);
            moved.push(h.class_of(&c.representative().add(&b)?)?);
        }
        let again = coindeterminacy(h, &moved[0], &moved[1], &moved[2], &moved[3])?;
        if again.coset != base.coset {
            report.representative_independent = false;
            let reps: Vec<String> = moved.iter().map(|c| dga.format(c.representative())).collect();
            report.failures.push(format!(
                "trial {t}: representatives ({}) give {} instead of {}",
                reps.join(", "),
                format_coset(h, &again),
                format_coset(h, &base)
            ));
        }
    }
    Ok(report)
}
