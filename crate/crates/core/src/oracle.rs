//! Exhaustive chain-level search over every lift choice, for tiny DGAs.
//!
//! Nothing here goes through the `gf2` module or the compiled `d` matrices.
//! Chains are packed `u64` words over a monomial basis rebuilt from the
//! presentation, lift sets come from scanning the whole chain space, and
//! boundaries are tested against a private xor basis. Homology coordinates
//! are attached only at the end, so results can be compared with the
//! linear-algebra path.

use std::cell::OnceCell;
use std::collections::{BTreeSet, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dga::{validate, ChainElement, Degree, Dga, DgaError, DgaPresentation};
use crate::gf2::{Gf2Subspace, Gf2Vector};
use crate::homology::{HomologyClass, HomologyError, HomologyStructure};
use crate::massey::{
    coindeterminacy, is_fourfold_defined, left_div_subgroup, right_div_subgroup, triple_bracket, MasseyError,
};

/// Largest number of chain states any single search may visit.
pub const STATE_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} needs {states} states, above the cap of {cap}")]
    CapExceeded { what: String, states: u128, cap: u64 },
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error("oracle basis disagrees with the compiled algebra in degree {0}")]
    BasisMismatch(Degree),
}

type Bits = Vec<u64>;

fn zeros(len: usize) -> Bits {
    vec![0; len.div_ceil(64)]
}

fn bit(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn flip(b: &mut Bits, i: usize) {
    b[i / 64] ^= 1 << (i % 64);
}

fn xor(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

fn xor_into(a: &mut Bits, b: &Bits) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn is_zero(b: &Bits) -> bool {
    b.iter().all(|&w| w == 0)
}

fn ones(b: &Bits) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(k, &w)| {
        (0..64).filter(move |i| w >> i & 1 == 1).map(move |i| k * 64 + i)
    })
}

fn highest(b: &Bits) -> Option<usize> {
    b.iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(k, &w)| k * 64 + 63 - w.leading_zeros() as usize)
}

/// Fully reduced xor basis, so the normal form is linear.
#[derive(Debug, Default)]
struct XorBasis {
    rows: Vec<(usize, Bits)>,
}

impl XorBasis {
    fn reduce(&self, mut v: Bits) -> Bits {
        for (p, r) in &self.rows {
            if bit(&v, *p) {
                xor_into(&mut v, r);
            }
        }
        v
    }

    fn insert(&mut self, v: Bits) {
        let v = self.reduce(v);
        let Some(p) = highest(&v) else { return };
        for (_, r) in &mut self.rows {
            if bit(r, p) {
                xor_into(r, &v);
            }
        }
        self.rows.push((p, v));
    }
}

fn check_cap(what: &str, states: u128) -> Result<(), OracleError> {
    if states > STATE_CAP as u128 {
        Err(OracleError::CapExceeded {
            what: what.to_string(),
            states,
            cap: STATE_CAP,
        })
    } else {
        Ok(())
    }
}

/// Chain model rebuilt from a presentation, plus homology labels.
pub struct Oracle<'h> {
    h: &'h HomologyStructure,
    gen_degrees: Vec<u32>,
    relations: Vec<Vec<u32>>,
    differentials: Vec<Vec<Vec<u32>>>,
    truncation: u32,
    bases: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    /// Oracle index of each compiled basis monomial, per degree.
    to_oracle: Vec<Vec<usize>>,
    lifts: Vec<OnceCell<HashMap<Bits, Vec<Bits>>>>,
    boundaries: Vec<OnceCell<XorBasis>>,
}

fn monomials_of_degree(degrees: &[u32], relations: &[Vec<u32>], target: u32) -> Vec<Vec<u32>> {
    fn go(degrees: &[u32], i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut e = 0;
        while e * degrees[i] <= left {
            cur[i] = e;
            go(degrees, i + 1, left - e * degrees[i], cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(degrees, 0, target, &mut vec![0; degrees.len()], &mut out);
    out.retain(|m| !relations.iter().any(|r| r.iter().zip(m).all(|(a, b)| a <= b)));
    out
}

impl<'h> Oracle<'h> {
    pub fn new(h: &'h HomologyStructure) -> Result<Self, OracleError> {
        let dga = h.dga();
        let p = dga.presentation();
        let gen_degrees: Vec<u32> = p.generators().iter().map(|g| g.degree).collect();
        let relations: Vec<Vec<u32>> = p.relations().iter().map(|m| m.exponents().to_vec()).collect();
        let differentials = (0..gen_degrees.len())
            .map(|i| p.differential_of(i).terms().map(|m| m.exponents().to_vec()).collect())
            .collect();
        let truncation = p.truncation();
        let mut bases = Vec::new();
        let mut index = Vec::new();
        let mut to_oracle = Vec::new();
        for n in 0..=truncation {
            let basis = monomials_of_degree(&gen_degrees, &relations, n);
            let idx: HashMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
            let compiled = dga.monomial_basis(n as Degree)?;
            if compiled.len() != basis.len() {
                return Err(OracleError::BasisMismatch(n as Degree));
            }
            let map = compiled
                .iter()
                .map(|m| idx.get(m.exponents()).copied().ok_or(OracleError::BasisMismatch(n as Degree)))
                .collect::<Result<Vec<_>, _>>()?;
            bases.push(basis);
            index.push(idx);
            to_oracle.push(map);
        }
        let slots = truncation as usize + 1;
        Ok(Self {
            h,
            gen_degrees,
            relations,
            differentials,
            truncation,
            bases,
            index,
            to_oracle,
            lifts: (0..slots).map(|_| OnceCell::new()).collect(),
            boundaries: (0..slots).map(|_| OnceCell::new()).collect(),
        })
    }

    fn dim(&self, n: Degree) -> usize {
        if n < 0 || n > self.truncation as Degree {
            0
        } else {
            self.bases[n as usize].len()
        }
    }

    fn in_ideal(&self, m: &[u32]) -> bool {
        self.relations.iter().any(|r| r.iter().zip(m).all(|(a, b)| a <= b))
    }

    fn degree_of(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.gen_degrees).map(|(e, d)| e * d).sum()
    }

    fn monomial(&self, n: Degree, m: &[u32]) -> Option<usize> {
        if n < 0 || n > self.truncation as Degree || self.in_ideal(m) {
            return None;
        }
        self.index[n as usize].get(m).copied()
    }

    /// `d` of the `i`-th basis monomial of degree `n`, by the Leibniz rule.
    fn d_monomial(&self, n: Degree, i: usize) -> Bits {
        let mut out = zeros(self.dim(n + 1));
        let m = &self.bases[n as usize][i];
        for (g, &e) in m.iter().enumerate() {
            if e % 2 == 0 {
                continue;
            }
            for t in &self.differentials[g] {
                let mut r = m.clone();
                r[g] -= 1;
                for (a, b) in r.iter_mut().zip(t) {
                    *a += b;
                }
                debug_assert_eq!(self.degree_of(&r) as Degree, n + 1);
                if let Some(j) = self.monomial(n + 1, &r) {
                    flip(&mut out, j);
                }
            }
        }
        out
    }

    fn multiply(&self, p: Degree, u: &Bits, q: Degree, v: &Bits) -> Bits {
        let n = p + q;
        let mut out = zeros(self.dim(n));
        for i in ones(u) {
            for j in ones(v) {
                let m: Vec<u32> = self.bases[p as usize][i]
                    .iter()
                    .zip(&self.bases[q as usize][j])
                    .map(|(a, b)| a + b)
                    .collect();
                if let Some(k) = self.monomial(n, &m) {
                    flip(&mut out, k);
                }
            }
        }
        out
    }

    /// Map from each boundary in degree `n + 1` to all of its preimages in
    /// degree `n`, found by walking the whole of `C^n` in Gray-code order.
    fn lift_table(&self, n: Degree) -> Result<&HashMap<Bits, Vec<Bits>>, OracleError> {
        let slot = &self.lifts[n as usize];
        if let Some(t) = slot.get() {
            return Ok(t);
        }
        let dim = self.dim(n);
        check_cap(&format!("enumerating degree-{n} chains"), 1u128 << dim)?;
        let images: Vec<Bits> = (0..dim).map(|i| self.d_monomial(n, i)).collect();
        let mut table: HashMap<Bits, Vec<Bits>> = HashMap::new();
        let mut v = zeros(dim);
        let mut dv = zeros(self.dim(n + 1));
        for step in 0u64..1 << dim {
            if step > 0 {
                let k = step.trailing_zeros() as usize;
                flip(&mut v, k);
                xor_into(&mut dv, &images[k]);
            }
            table.entry(dv.clone()).or_default().push(v.clone());
        }
        Ok(slot.get_or_init(|| table))
    }

    /// Every `x` in degree `n` with `d x = target`.
    fn lifts_of(&self, n: Degree, target: &Bits) -> Result<Vec<Bits>, OracleError> {
        if n < 0 {
            return Ok(if is_zero(target) { vec![Vec::new()] } else { Vec::new() });
        }
        Ok(self.lift_table(n)?.get(target).cloned().unwrap_or_default())
    }

    fn boundary_basis(&self, n: Degree) -> &XorBasis {
        self.boundaries[n as usize].get_or_init(|| {
            let mut basis = XorBasis::default();
            if n > 0 {
                for i in 0..self.dim(n - 1) {
                    basis.insert(self.d_monomial(n - 1, i));
                }
            }
            basis
        })
    }

    /// Normal form modulo boundaries; equal exactly for homologous chains.
    fn normal_form(&self, n: Degree, v: Bits) -> Bits {
        self.boundary_basis(n).reduce(v)
    }

    fn chain(&self, u: &ChainElement) -> Bits {
        let n = u.degree();
        let mut out = zeros(self.dim(n));
        for i in u.coords().ones() {
            flip(&mut out, self.to_oracle[n as usize][i]);
        }
        out
    }

    fn element(&self, n: Degree, v: &Bits) -> ChainElement {
        let map = &self.to_oracle[n as usize];
        let coords = Gf2Vector::from_indices(map.len(), (0..map.len()).filter(|&i| bit(v, map[i])));
        ChainElement::new(n, coords)
    }

    fn classes(&self, n: Degree, values: impl IntoIterator<Item = Bits>) -> Result<BTreeSet<Gf2Vector>, OracleError> {
        values
            .into_iter()
            .map(|v| Ok(self.h.class_of(&self.element(n, &v))?.coords().clone()))
            .collect()
    }

    fn require(&self, n: Degree) -> Result<(), OracleError> {
        self.h.degree(n)?;
        Ok(())
    }

    /// Every value `a0·a12 + a01·a2` of `⟨s0, s1, s2⟩`; empty when no
    /// defining system exists.
    pub fn triple(&self, s: [&HomologyClass; 3]) -> Result<BTreeSet<Gf2Vector>, OracleError> {
        let [n0, n1, n2] = s.map(|c| c.degree());
        let [a0, a1, a2] = s.map(|c| self.chain(c.representative()));
        let (p01, p12, t) = (n0 + n1 - 1, n1 + n2 - 1, n0 + n1 + n2 - 1);
        self.require(t)?;
        let s01 = self.lifts_of(p01, &self.multiply(n0, &a0, n1, &a1))?;
        let s12 = self.lifts_of(p12, &self.multiply(n1, &a1, n2, &a2))?;
        check_cap("triple bracket lift pairs", s01.len() as u128 * s12.len() as u128)?;
        let left: HashSet<Bits> = s12
            .iter()
            .map(|a12| self.normal_form(t, self.multiply(n0, &a0, p12, a12)))
            .collect();
        let right: HashSet<Bits> = s01
            .iter()
            .map(|a01| self.normal_form(t, self.multiply(p01, a01, n2, &a2)))
            .collect();
        let values: HashSet<Bits> = left.iter().flat_map(|l| right.iter().map(move |r| xor(l, r))).collect();
        self.classes(t, values)
    }

    /// Admissible lifts `x` of `a1·a2` for the left bracket, then `y` for the
    /// right one.
    fn admissible(&self, s: [&HomologyClass; 4]) -> Result<(Vec<Bits>, Vec<Bits>), OracleError> {
        let [n0, n1, n2, n3] = s.map(|c| c.degree());
        let [a0, a1, a2, a3] = s.map(|c| self.chain(c.representative()));
        let (p01, p12, p23) = (n0 + n1 - 1, n1 + n2 - 1, n2 + n3 - 1);
        let (tl, tr) = (n0 + n1 + n2 - 1, n1 + n2 + n3 - 1);
        self.require(tl.max(tr))?;
        let s01 = self.lifts_of(p01, &self.multiply(n0, &a0, n1, &a1))?;
        let s12 = self.lifts_of(p12, &self.multiply(n1, &a1, n2, &a2))?;
        let s23 = self.lifts_of(p23, &self.multiply(n2, &a2, n3, &a3))?;
        check_cap(
            "admissible lift search",
            s12.len() as u128 * (s01.len() + s23.len()) as u128,
        )?;
        // x is admissible when a0·x + z·a2 bounds for some lift z of a0·a1
        let z_side: HashSet<Bits> = s01
            .iter()
            .map(|z| self.normal_form(tl, self.multiply(p01, z, n2, &a2)))
            .collect();
        let w_side: HashSet<Bits> = s23
            .iter()
            .map(|w| self.normal_form(tr, self.multiply(n1, &a1, p23, w)))
            .collect();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for a12 in &s12 {
            if z_side.contains(&self.normal_form(tl, self.multiply(n0, &a0, p12, a12))) {
                xs.push(a12.clone());
            }
            if w_side.contains(&self.normal_form(tr, self.multiply(p12, a12, n3, &a3))) {
                ys.push(a12.clone());
            }
        }
        Ok((xs, ys))
    }

    /// All classes `x̄ + ȳ` over admissible `x` and `y`; empty when either
    /// side has none.
    pub fn coindet(&self, s: [&HomologyClass; 4]) -> Result<BTreeSet<Gf2Vector>, OracleError> {
        let (xs, ys) = self.admissible(s)?;
        let p12 = s[1].degree() + s[2].degree() - 1;
        self.require(p12)?;
        check_cap("coindeterminacy pairs", xs.len() as u128 * ys.len() as u128)?;
        let xs: HashSet<Bits> = xs.into_iter().map(|x| self.normal_form(p12, x)).collect();
        let ys: HashSet<Bits> = ys.into_iter().map(|y| self.normal_form(p12, y)).collect();
        let sums: HashSet<Bits> = xs.iter().flat_map(|x| ys.iter().map(move |y| xor(x, y))).collect();
        self.classes(p12, sums)
    }

    /// Whether a single `a12` is admissible on both sides at once.
    pub fn fourfold_defined(&self, s: [&HomologyClass; 4]) -> Result<bool, OracleError> {
        let (xs, ys) = self.admissible(s)?;
        let ys: HashSet<Bits> = ys.into_iter().collect();
        Ok(xs.iter().any(|x| ys.contains(x)))
    }

    /// Every value `a0·a13 + a01·a23 + a02·a3` over all defining systems.
    pub fn fourfold_values(&self, s: [&HomologyClass; 4]) -> Result<BTreeSet<Gf2Vector>, OracleError> {
        let [n0, n1, n2, n3] = s.map(|c| c.degree());
        let [a0, a1, a2, a3] = s.map(|c| self.chain(c.representative()));
        let (p01, p12, p23) = (n0 + n1 - 1, n1 + n2 - 1, n2 + n3 - 1);
        let (p02, p13) = (n0 + n1 + n2 - 2, n1 + n2 + n3 - 2);
        let t = n0 + n1 + n2 + n3 - 2;
        self.require(t)?;
        let s01 = self.lifts_of(p01, &self.multiply(n0, &a0, n1, &a1))?;
        let s12 = self.lifts_of(p12, &self.multiply(n1, &a1, n2, &a2))?;
        let s23 = self.lifts_of(p23, &self.multiply(n2, &a2, n3, &a3))?;
        check_cap(
            "fourfold defining systems",
            s01.len() as u128 * s12.len() as u128 * s23.len() as u128,
        )?;
        let mut values = HashSet::new();
        for a12 in &s12 {
            let a0a12 = self.multiply(n0, &a0, p12, a12);
            let a12a3 = self.multiply(p12, a12, n3, &a3);
            for a01 in &s01 {
                let left = xor(&a0a12, &self.multiply(p01, a01, n2, &a2));
                let s02 = self.lifts_of(p02, &left)?;
                if s02.is_empty() {
                    continue;
                }
                // a02 and a13 enter additively, so their contributions are
                // collected separately and summed
                let from_a02: HashSet<Bits> = s02
                    .iter()
                    .map(|a02| self.normal_form(t, self.multiply(p02, a02, n3, &a3)))
                    .collect();
                for a23 in &s23 {
                    let right = xor(&self.multiply(n1, &a1, p23, a23), &a12a3);
                    let s13 = self.lifts_of(p13, &right)?;
                    if s13.is_empty() {
                        continue;
                    }
                    let base = self.normal_form(t, self.multiply(p01, a01, p23, a23));
                    let from_a13: HashSet<Bits> = s13
                        .iter()
                        .map(|a13| self.normal_form(t, self.multiply(n0, &a0, p13, a13)))
                        .collect();
                    for l in &from_a02 {
                        let partial = xor(&base, l);
                        for r in &from_a13 {
                            values.insert(xor(&partial, r));
                        }
                    }
                }
            }
        }
        self.classes(t, values)
    }
}

pub fn brute_force_triple(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
) -> Result<BTreeSet<Gf2Vector>, OracleError> {
    Oracle::new(h)?.triple([s0, s1, s2])
}

pub fn brute_force_coindet(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
    s3: &HomologyClass,
) -> Result<BTreeSet<Gf2Vector>, OracleError> {
    Oracle::new(h)?.coindet([s0, s1, s2, s3])
}

pub fn brute_force_fourfold_defined(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
    s3: &HomologyClass,
) -> Result<bool, OracleError> {
    Oracle::new(h)?.fourfold_defined([s0, s1, s2, s3])
}

pub fn brute_force_fourfold_values(
    h: &HomologyStructure,
    s0: &HomologyClass,
    s1: &HomologyClass,
    s2: &HomologyClass,
    s3: &HomologyClass,
) -> Result<BTreeSet<Gf2Vector>, OracleError> {
    Oracle::new(h)?.fourfold_values([s0, s1, s2, s3])
}

/// Parameters for [`random_presentation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomDgaSpec {
    pub seed: u64,
    pub max_generators: usize,
    /// Also the truncation.
    pub max_degree: u32,
    /// Chance `numerator / denominator` that a generator gets a nonzero
    /// differential.
    pub differential_density: (u32, u32),
}

/// A random valid presentation, deterministic in the seed. Each
/// differential is a random cycle of the sub-DGA on the earlier generators,
/// so `d² = 0` holds by construction.
pub fn random_presentation(spec: &RandomDgaSpec) -> DgaPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let truncation = spec.max_degree.max(2);
    let count = rng.gen_range(1..=spec.max_generators.max(1));
    let mut p = DgaPresentation::new(&format!("random_{}", spec.seed), truncation);
    for k in 0..count {
        let degree = if truncation >= 5 && rng.gen_ratio(1, 4) { 2 } else { 1 };
        p.add_generator(&format!("g{k}"), degree).expect("fresh name");
    }
    let (num, den) = spec.differential_density;
    for k in 0..count {
        if num == 0 || den == 0 || !rng.gen_ratio(num.min(den), den) {
            continue;
        }
        let target = p.generators()[k].degree as Degree + 1;
        if target > truncation as Degree {
            continue;
        }
        let mut sub = DgaPresentation::new("sub", truncation);
        for g in &p.generators()[..k] {
            sub.add_generator(&g.name, g.degree).expect("distinct names");
        }
        for (i, g) in p.generators()[..k].iter().enumerate() {
            let text = p.format_polynomial(p.differential_of(i));
            if !text.is_empty() {
                sub.set_differential(&g.name, &text).expect("names carry over");
            }
        }
        let sub = Dga::new(sub).expect("sub-DGA of a valid presentation");
        let cycles = cycle_space(&sub, target);
        let mut d = Gf2Vector::zeros(cycles.ambient_dim());
        for b in cycles.basis() {
            if rng.gen_bool(0.5) {
                d += b;
            }
        }
        let d = ChainElement::new(target, d);
        if !d.is_zero() {
            let name = p.generators()[k].name.clone();
            p.set_differential(&name, &sub.format(&d)).expect("names carry over");
        }
    }
    debug_assert!(validate(&p).passed());
    p
}

fn cycle_space(dga: &Dga, n: Degree) -> Gf2Subspace {
    if n >= dga.truncation() as Degree {
        return Gf2Subspace::full(dga.dim(n).unwrap_or(0));
    }
    crate::gf2::null_space(&dga.d_matrix(n).expect("below truncation"))
}

const SKELETON_CYCLES: [&str; 5] = ["a0", "a1", "a2", "a3", "c"];

/// The four-stage defining-system shape with random perturbations: products
/// `a0·g`, `g·a2` added to `d(a02)` and `a1·g`, `g·a3` added to `d(a13)` for
/// cycle generators `g` (these stay inside the threefold indeterminacies),
/// plus random monomial relations among the cycle generators.
pub fn massey_skeleton(seed: u64) -> DgaPresentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let products: Vec<String> = SKELETON_CYCLES
        .iter()
        .enumerate()
        .flat_map(|(i, a)| SKELETON_CYCLES[i..].iter().map(move |b| format!("{a}*{b}")))
        .collect();
    let perturb = |base: &str, left: &str, right: &str, rng: &mut ChaCha8Rng| {
        let mut terms = vec![base.to_string()];
        for g in SKELETON_CYCLES {
            if rng.gen_ratio(1, 5) {
                terms.push(format!("{left}*{g}"));
            }
            if rng.gen_ratio(1, 5) {
                terms.push(format!("{g}*{right}"));
            }
        }
        terms.join(" + ")
    };
    let d02 = perturb("a0*a12 + a01*a2", "a0", "a2", &mut rng);
    let d13 = perturb("a1*a23 + a12*a3", "a1", "a3", &mut rng);
    let relations: Vec<&String> = products.iter().filter(|_| rng.gen_ratio(1, 10)).collect();
    let mut p = DgaPresentation::new(&format!("skeleton_{seed}"), 4);
    for g in ["a0", "a1", "a2", "a3", "a01", "a12", "a23", "c", "a02", "a13"] {
        p.add_generator(g, 1).expect("fresh name");
    }
    for (g, d) in [
        ("a01", "a0*a1"),
        ("a12", "a1*a2"),
        ("a23", "a2*a3"),
        ("a02", d02.as_str()),
        ("a13", d13.as_str()),
    ] {
        p.set_differential(g, d).expect("known names");
    }
    for r in relations {
        p.add_relation(r).expect("known names");
    }
    p
}

/// A presentation with four input cycles, written as chain polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomInstance {
    pub seed: u64,
    pub presentation: DgaPresentation,
    pub inputs: [String; 4],
}

/// Draws a presentation (generic or skeleton, by coin flip) and then picks
/// degree-one classes, retrying until both threefold brackets contain zero
/// or the attempts run out.
pub fn random_instance(seed: u64, max_generators: usize, max_degree: u32) -> RandomInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let presentation = if rng.gen_bool(0.5) {
        massey_skeleton(rng.gen())
    } else {
        random_presentation(&RandomDgaSpec {
            seed: rng.gen(),
            max_generators,
            max_degree: max_degree.max(4),
            differential_density: (1, 2),
        })
    };
    let h = HomologyStructure::new(Dga::new(presentation.clone()).expect("generated presentations are valid"));
    let dga = h.dga();
    let basis = h.basis(1).expect("degree 1 is below the truncation");
    let skeleton = presentation.generator_index("a01").is_some();
    let pick = |rng: &mut ChaCha8Rng, i: usize| -> HomologyClass {
        let mut v = if skeleton && rng.gen_ratio(15, 16) {
            dga.generator(SKELETON_CYCLES[i]).expect("skeleton generator")
        } else {
            dga.zero(1).expect("degree 1")
        };
        for b in &basis {
            if rng.gen_ratio(1, if skeleton { 10 } else { 2 }) {
                v = v.add(b).expect("same degree");
            }
        }
        h.class_of(&v).expect("sums of cycles are cycles")
    };
    let mut s: Vec<HomologyClass> = Vec::new();
    for _ in 0..64 {
        s = (0..4).map(|i| pick(&mut rng, i)).collect();
        let ok = matches!(triple_bracket(&h, &s[0], &s[1], &s[2]), Ok(t) if t.contains_zero())
            && matches!(triple_bracket(&h, &s[1], &s[2], &s[3]), Ok(t) if t.contains_zero());
        if ok {
            break;
        }
    }
    let inputs = [0, 1, 2, 3].map(|i| dga.format_argument(s[i].representative()));
    RandomInstance {
        seed,
        presentation,
        inputs,
    }
}

/// Fast path against oracle on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceCheck {
    pub seed: u64,
    /// Both threefold brackets contain zero.
    pub hypotheses_hold: bool,
    /// `None` when the oracle hit its cap.
    pub oracle_completed: bool,
    pub fast_defined: Option<bool>,
    pub oracle_defined: Option<bool>,
    pub oracle_coindet_contains_zero: Option<bool>,
    /// The coset direction equals the sum of the divisibility subgroups.
    pub coset_law: Option<bool>,
    /// Either threefold bracket is strictly zero.
    pub half_strict: Option<bool>,
    pub mismatches: Vec<String>,
}

impl InstanceCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn affine_equals_set(
    value: &crate::gf2::Gf2AffineSubspace,
    set: &BTreeSet<Gf2Vector>,
) -> Result<bool, crate::gf2::Gf2Error> {
    let dim = value.direction().dim();
    if dim >= 64 || set.len() as u128 != 1u128 << dim {
        return Ok(false);
    }
    for v in set {
        if !value.contains(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs both paths on an instance and records every disagreement.
pub fn check_instance(instance: &RandomInstance) -> Result<InstanceCheck, MasseyError> {
    let h = HomologyStructure::new(Dga::new(instance.presentation.clone())?);
    let dga = h.dga();
    let s = instance
        .inputs
        .iter()
        .map(|t| Ok(h.class_of(&dga.parse_element(t)?)?))
        .collect::<Result<Vec<_>, MasseyError>>()?;
    let mut out = InstanceCheck {
        seed: instance.seed,
        hypotheses_hold: false,
        oracle_completed: false,
        fast_defined: None,
        oracle_defined: None,
        oracle_coindet_contains_zero: None,
        coset_law: None,
        half_strict: None,
        mismatches: Vec::new(),
    };
    let oracle = match Oracle::new(&h) {
        Ok(o) => o,
        Err(e) => {
            out.mismatches.push(format!("oracle setup failed: {e}"));
            return Ok(out);
        }
    };

    let triples = [[&s[0], &s[1], &s[2]], [&s[1], &s[2], &s[3]]];
    let mut brackets = Vec::new();
    for t in triples {
        let fast = match triple_bracket(&h, t[0], t[1], t[2]) {
            Ok(b) => Some(b),
            Err(MasseyError::ProductNotBoundary { .. }) => None,
            Err(e) => return Err(e),
        };
        match oracle.triple(t) {
            Ok(set) => {
                let agree = match &fast {
                    Some(b) => affine_equals_set(&b.value, &set)?,
                    None => set.is_empty(),
                };
                if !agree {
                    out.mismatches.push("threefold bracket differs from exhaustive search".into());
                }
            }
            Err(OracleError::CapExceeded { .. }) => return Ok(out),
            Err(e) => out.mismatches.push(format!("oracle failed: {e}")),
        }
        brackets.push(fast);
    }
    out.hypotheses_hold = brackets.iter().all(|b| b.as_ref().is_some_and(|b| b.contains_zero()));

    let oracle_coindet = match oracle.coindet([&s[0], &s[1], &s[2], &s[3]]) {
        Ok(set) => set,
        Err(OracleError::CapExceeded { .. }) => return Ok(out),
        Err(e) => {
            out.mismatches.push(format!("oracle failed: {e}"));
            return Ok(out);
        }
    };
    let oracle_defined = match oracle.fourfold_defined([&s[0], &s[1], &s[2], &s[3]]) {
        Ok(d) => d,
        Err(OracleError::CapExceeded { .. }) => return Ok(out),
        Err(e) => {
            out.mismatches.push(format!("oracle failed: {e}"));
            return Ok(out);
        }
    };
    out.oracle_completed = true;
    let zero = Gf2Vector::zeros(h.dim(s[1].degree() + s[2].degree() - 1)?);
    let oracle_zero = oracle_coindet.contains(&zero);
    out.oracle_defined = Some(oracle_defined);
    out.oracle_coindet_contains_zero = Some(oracle_zero);
    if oracle_defined != oracle_zero {
        out.mismatches
            .push(format!("oracle: defined {oracle_defined} but zero in coindeterminacy {oracle_zero}"));
    }

    if !out.hypotheses_hold {
        if !oracle_coindet.is_empty() || oracle_defined {
            out.mismatches
                .push("a threefold bracket excludes zero, yet the oracle found admissible lifts".into());
        }
        return Ok(out);
    }

    let (fast_defined, c) = is_fourfold_defined(&h, &s[0], &s[1], &s[2], &s[3])?;
    out.fast_defined = Some(fast_defined);
    if fast_defined != oracle_defined {
        out.mismatches
            .push(format!("fast path says defined {fast_defined}, exhaustive search says {oracle_defined}"));
    }
    if !affine_equals_set(&c.coset, &oracle_coindet)? {
        out.mismatches.push("coindeterminacy differs from exhaustive search".into());
    }
    let direction = left_div_subgroup(&h, &s[0], &s[2], c.degree)?.sum(&right_div_subgroup(&h, &s[1], &s[3], c.degree)?)?;
    let law = &direction == c.coset.direction();
    out.coset_law = Some(law);
    if !law {
        out.mismatches
            .push("coindeterminacy direction is not the sum of the divisibility subgroups".into());
    }
    let strict = brackets.iter().any(|b| b.as_ref().is_some_and(|b| b.strictly_zero));
    out.half_strict = Some(strict);
    if strict && !fast_defined {
        out.mismatches
            .push("a threefold bracket is strictly zero but the fourfold bracket is undefined".into());
    }
    // coindeterminacy() already rejects a disagreement with the joint system
    let again = coindeterminacy(&h, &s[0], &s[1], &s[2], &s[3])?;
    if again != c {
        out.mismatches.push("coindeterminacy is not deterministic".into());
    }
    Ok(out)
}
