//! Exact linear algebra over the two-element field.
//!
//! Vectors are packed into `u64` words. Subspaces are kept in reduced row
//! echelon form (pivot = lowest set index, pivots strictly increasing, every
//! pivot column zero in the other basis rows), so two subspaces are equal
//! exactly when their bases are identical.

use std::fmt;
use std::ops::{Add, AddAssign};

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
}

fn check_dim(expected: usize, found: usize) -> Result<(), Gf2Error> {
    if expected == found {
        Ok(())
    } else {
        Err(Gf2Error::DimensionMismatch { expected, found })
    }
}

/// A vector in F₂ⁿ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Gf2Error> {
        check_dim(self.len, other.len)?;
        let mut out = self.clone();
        out.xor_words(other);
        Ok(out)
    }

    fn xor_words(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Concatenation of blocks, in order.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Gf2Vector>) -> Self {
        let parts: Vec<&Gf2Vector> = parts.into_iter().collect();
        let total = parts.iter().map(|p| p.len).sum();
        let mut out = Self::zeros(total);
        let mut offset = 0;
        for p in parts {
            for i in p.ones() {
                out.set(offset + i, true);
            }
            offset += p.len;
        }
        out
    }

    /// The coordinates `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> Self {
        assert!(start + len <= self.len);
        let mut out = Self::zeros(len);
        for i in self.ones().skip_while(|&i| i < start).take_while(|&i| i < start + len) {
            out.set(i - start, true);
        }
        out
    }
}

impl AddAssign<&Gf2Vector> for Gf2Vector {
    fn add_assign(&mut self, rhs: &Gf2Vector) {
        assert_eq!(self.len, rhs.len, "adding vectors of different lengths");
        self.xor_words(rhs);
    }
}

impl Add<&Gf2Vector> for &Gf2Vector {
    type Output = Gf2Vector;

    fn add(self, rhs: &Gf2Vector) -> Gf2Vector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, "]")
    }
}

/// A `rows × cols` matrix over F₂, stored by columns.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    columns: Vec<Gf2Vector>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            columns: vec![Gf2Vector::zeros(rows); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            columns: (0..n).map(|i| Gf2Vector::unit(n, i)).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<Gf2Vector>) -> Result<Self, Gf2Error> {
        for c in &columns {
            check_dim(rows, c.len())?;
        }
        Ok(Self { rows, columns })
    }

    /// Row-major 0/1 entries; every row must have the same length.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self, Gf2Error> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            check_dim(cols, row.len())?;
            for (j, &e) in row.iter().enumerate() {
                if e & 1 == 1 {
                    m.columns[j].set(i, true);
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &Gf2Vector {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Gf2Vector] {
        &self.columns
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.columns[col].get(row)
    }

    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        check_dim(self.cols(), v.len())?;
        let mut out = Gf2Vector::zeros(self.rows);
        for j in v.ones() {
            out += &self.columns[j];
        }
        Ok(out)
    }

    /// `self · other`.
    pub fn compose(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        check_dim(self.cols(), other.rows())?;
        let columns = other
            .columns
            .iter()
            .map(|c| self.mul_vec(c))
            .collect::<Result<_, _>>()?;
        Ok(Gf2Matrix {
            rows: self.rows,
            columns,
        })
    }

    pub fn rank(&self) -> usize {
        column_space(self).dim()
    }

    /// Image of a subspace of the source.
    pub fn image_of(&self, s: &Gf2Subspace) -> Result<Gf2Subspace, Gf2Error> {
        check_dim(self.cols(), s.ambient_dim())?;
        let images = s
            .basis()
            .iter()
            .map(|b| self.mul_vec(b))
            .collect::<Result<Vec<_>, _>>()?;
        Gf2Subspace::from_spanning(self.rows, images)
    }

    /// `{ v : self·v ∈ target }`.
    pub fn preimage(&self, target: &Gf2Subspace) -> Result<Gf2Subspace, Gf2Error> {
        check_dim(self.rows, target.ambient_dim())?;
        let q = QuotientMap::new(&Gf2Subspace::full(self.rows), target)?;
        let columns = self
            .columns
            .iter()
            .map(|c| q.apply(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(null_space(&Gf2Matrix {
            rows: q.dim(),
            columns,
        }))
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols())?;
        for i in 0..self.rows {
            for j in 0..self.cols() {
                write!(f, "{}", self.get(i, j) as u8)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Row {
    vec: Gf2Vector,
    tag: Gf2Vector,
    pivot: usize,
}

/// Incremental reduced row echelon form. Each row carries a tag recording
/// which inserted vectors it is a combination of.
#[derive(Clone, Debug)]
struct Echelon {
    dim: usize,
    tag_len: usize,
    rows: Vec<Row>,
}

impl Echelon {
    fn new(dim: usize, tag_len: usize) -> Self {
        Self {
            dim,
            tag_len,
            rows: Vec::new(),
        }
    }

    fn reduce(&self, v: &mut Gf2Vector, tag: &mut Gf2Vector) {
        for r in &self.rows {
            if v.get(r.pivot) {
                v.xor_words(&r.vec);
                tag.xor_words(&r.tag);
            }
        }
    }

    /// Returns false when `v` was already in the span.
    fn insert(&mut self, mut v: Gf2Vector, mut tag: Gf2Vector) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        debug_assert_eq!(tag.len(), self.tag_len);
        self.reduce(&mut v, &mut tag);
        let Some(pivot) = v.first_one() else {
            return false;
        };
        for r in &mut self.rows {
            if r.vec.get(pivot) {
                r.vec.xor_words(&v);
                r.tag.xor_words(&tag);
            }
        }
        let at = self.rows.partition_point(|r| r.pivot < pivot);
        self.rows.insert(at, Row { vec: v, tag, pivot });
        true
    }
}

/// A linear subspace of F₂ⁿ in canonical reduced echelon form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Subspace {
    ambient_dim: usize,
    basis: Vec<Gf2Vector>,
}

impl Gf2Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: (0..ambient_dim)
                .map(|i| Gf2Vector::unit(ambient_dim, i))
                .collect(),
        }
    }

    pub fn from_spanning(
        ambient_dim: usize,
        vectors: impl IntoIterator<Item = Gf2Vector>,
    ) -> Result<Self, Gf2Error> {
        let mut e = Echelon::new(ambient_dim, 0);
        for v in vectors {
            check_dim(ambient_dim, v.len())?;
            e.insert(v, Gf2Vector::zeros(0));
        }
        Ok(Self::from_echelon(e))
    }

    fn from_echelon(e: Echelon) -> Self {
        Self {
            ambient_dim: e.dim,
            basis: e.rows.into_iter().map(|r| r.vec).collect(),
        }
    }

    fn echelon(&self) -> Echelon {
        Echelon {
            dim: self.ambient_dim,
            tag_len: 0,
            rows: self
                .basis
                .iter()
                .map(|b| Row {
                    vec: b.clone(),
                    tag: Gf2Vector::zeros(0),
                    pivot: b.first_one().expect("basis vectors are nonzero"),
                })
                .collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Gf2Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().filter_map(Gf2Vector::first_one).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Canonical representative of `v + self`: `v` with every pivot cleared.
    pub fn reduce(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        check_dim(self.ambient_dim, v.len())?;
        let mut out = v.clone();
        for b in &self.basis {
            if out.get(b.first_one().expect("nonzero basis vector")) {
                out.xor_words(b);
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &Gf2Vector) -> Result<bool, Gf2Error> {
        Ok(self.reduce(v)?.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Gf2Subspace) -> Result<bool, Gf2Error> {
        check_dim(other.ambient_dim, self.ambient_dim)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Gf2Subspace) -> Result<Gf2Subspace, Gf2Error> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let mut e = self.echelon();
        for b in &other.basis {
            e.insert(b.clone(), Gf2Vector::zeros(0));
        }
        Ok(Self::from_echelon(e))
    }

    /// Zassenhaus: echelonize `(s | s)` and `(t | 0)`; rows whose left half
    /// vanishes span the intersection.
    pub fn intersection(&self, other: &Gf2Subspace) -> Result<Gf2Subspace, Gf2Error> {
        check_dim(self.ambient_dim, other.ambient_dim)?;
        let n = self.ambient_dim;
        let zero = Gf2Vector::zeros(n);
        let mut e = Echelon::new(2 * n, 0);
        for s in &self.basis {
            e.insert(Gf2Vector::concat([s, s]), Gf2Vector::zeros(0));
        }
        for t in &other.basis {
            e.insert(Gf2Vector::concat([t, &zero]), Gf2Vector::zeros(0));
        }
        let meet = e
            .rows
            .iter()
            .filter(|r| r.pivot >= n)
            .map(|r| r.vec.slice(n, n));
        Gf2Subspace::from_spanning(n, meet)
    }

    /// All `2^dim` elements, in Gray-code order starting at zero.
    pub fn elements(&self) -> impl Iterator<Item = Gf2Vector> + '_ {
        assert!(self.dim() < 32, "refusing to enumerate 2^{} elements", self.dim());
        let mut current = Gf2Vector::zeros(self.ambient_dim);
        let count = 1u64 << self.dim();
        (0..count).map(move |i| {
            if i > 0 {
                current += &self.basis[i.trailing_zeros() as usize];
            }
            current.clone()
        })
    }
}

impl fmt::Debug for Gf2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf2Subspace")
            .field("ambient_dim", &self.ambient_dim)
            .field("basis", &self.basis)
            .finish()
    }
}

/// `representative + direction`, with the representative reduced against the
/// direction so that structural equality is set equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gf2AffineSubspace {
    representative: Gf2Vector,
    direction: Gf2Subspace,
}

impl Gf2AffineSubspace {
    pub fn new(representative: Gf2Vector, direction: Gf2Subspace) -> Result<Self, Gf2Error> {
        let representative = direction.reduce(&representative)?;
        Ok(Self {
            representative,
            direction,
        })
    }

    pub fn point(v: Gf2Vector) -> Self {
        let n = v.len();
        Self {
            representative: v,
            direction: Gf2Subspace::zero(n),
        }
    }

    pub fn representative(&self) -> &Gf2Vector {
        &self.representative
    }

    pub fn direction(&self) -> &Gf2Subspace {
        &self.direction
    }

    pub fn ambient_dim(&self) -> usize {
        self.direction.ambient_dim()
    }

    pub fn contains(&self, v: &Gf2Vector) -> Result<bool, Gf2Error> {
        Ok(self.direction.reduce(v)? == self.representative)
    }

    pub fn contains_zero(&self) -> bool {
        self.representative.is_zero()
    }

    /// True when the set is exactly `{0}`.
    pub fn is_zero_point(&self) -> bool {
        self.representative.is_zero() && self.direction.is_zero()
    }

    pub fn elements(&self) -> impl Iterator<Item = Gf2Vector> + '_ {
        self.direction.elements().map(|d| &d + &self.representative)
    }
}

/// A solution set `particular + kernel` of a linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Gf2Vector,
    pub kernel: Gf2Subspace,
}

impl Solution {
    pub fn as_affine(&self) -> Gf2AffineSubspace {
        Gf2AffineSubspace::new(self.particular.clone(), self.kernel.clone())
            .expect("kernel and particular share a dimension")
    }
}

/// Echelon of the columns of `m`, each tagged by its column index. Columns
/// that turn out dependent are returned separately.
fn column_echelon(m: &Gf2Matrix) -> (Echelon, Vec<usize>) {
    let cols = m.cols();
    let mut e = Echelon::new(m.rows(), cols);
    let mut dependent = Vec::new();
    for (j, c) in m.columns().iter().enumerate() {
        if !e.insert(c.clone(), Gf2Vector::unit(cols, j)) {
            dependent.push(j);
        }
    }
    (e, dependent)
}

fn kernel_from(e: &Echelon, m: &Gf2Matrix, dependent: &[usize]) -> Gf2Subspace {
    let cols = m.cols();
    let vectors = dependent.iter().map(|&j| {
        let mut v = m.column(j).clone();
        let mut tag = Gf2Vector::unit(cols, j);
        e.reduce(&mut v, &mut tag);
        debug_assert!(v.is_zero());
        tag
    });
    Gf2Subspace::from_spanning(cols, vectors).expect("tags have length cols")
}

/// Solves `m·x = target`. Free variables of the particular solution are zero.
pub fn solve(m: &Gf2Matrix, target: &Gf2Vector) -> Result<Option<Solution>, Gf2Error> {
    check_dim(m.rows(), target.len())?;
    let (e, dependent) = column_echelon(m);
    let mut residual = target.clone();
    let mut particular = Gf2Vector::zeros(m.cols());
    e.reduce(&mut residual, &mut particular);
    if !residual.is_zero() {
        return Ok(None);
    }
    Ok(Some(Solution {
        particular,
        kernel: kernel_from(&e, m, &dependent),
    }))
}

pub fn null_space(m: &Gf2Matrix) -> Gf2Subspace {
    let (e, dependent) = column_echelon(m);
    kernel_from(&e, m, &dependent)
}

pub fn column_space(m: &Gf2Matrix) -> Gf2Subspace {
    Gf2Subspace::from_spanning(m.rows(), m.columns().iter().cloned())
        .expect("columns have length rows")
}

/// Coordinates on `ambient / modulo`.
///
/// The quotient basis is the run of `ambient`'s canonical basis vectors that
/// are independent modulo `modulo`, taken in pivot order.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    echelon: Echelon,
    complement: Vec<Gf2Vector>,
    ambient: Gf2Subspace,
}

impl QuotientMap {
    pub fn new(ambient: &Gf2Subspace, modulo: &Gf2Subspace) -> Result<Self, Gf2Error> {
        check_dim(ambient.ambient_dim(), modulo.ambient_dim())?;
        if !modulo.is_subspace_of(ambient)? {
            return Err(Gf2Error::NotContained);
        }
        let n = ambient.ambient_dim();
        let mut probe = modulo.echelon();
        let complement: Vec<Gf2Vector> = ambient
            .basis()
            .iter()
            .filter(|b| probe.insert((*b).clone(), Gf2Vector::zeros(0)))
            .cloned()
            .collect();
        let k = complement.len();
        let mut echelon = Echelon::new(n, k);
        for b in modulo.basis() {
            echelon.insert(b.clone(), Gf2Vector::zeros(k));
        }
        for (i, c) in complement.iter().enumerate() {
            echelon.insert(c.clone(), Gf2Vector::unit(k, i));
        }
        Ok(Self {
            echelon,
            complement,
            ambient: ambient.clone(),
        })
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    /// Chosen representatives of the quotient basis.
    pub fn complement(&self) -> &[Gf2Vector] {
        &self.complement
    }

    pub fn ambient(&self) -> &Gf2Subspace {
        &self.ambient
    }

    pub fn apply(&self, v: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        check_dim(self.echelon.dim, v.len())?;
        let mut residual = v.clone();
        let mut coords = Gf2Vector::zeros(self.dim());
        self.echelon.reduce(&mut residual, &mut coords);
        if residual.is_zero() {
            Ok(coords)
        } else {
            Err(Gf2Error::NotContained)
        }
    }

    /// `Σ coords[i] · complement[i]`.
    pub fn lift(&self, coords: &Gf2Vector) -> Result<Gf2Vector, Gf2Error> {
        check_dim(self.dim(), coords.len())?;
        let mut out = Gf2Vector::zeros(self.echelon.dim);
        for i in coords.ones() {
            out += &self.complement[i];
        }
        Ok(out)
    }

    pub fn image_of(&self, s: &Gf2Subspace) -> Result<Gf2Subspace, Gf2Error> {
        let images = s
            .basis()
            .iter()
            .map(|b| self.apply(b))
            .collect::<Result<Vec<_>, _>>()?;
        Gf2Subspace::from_spanning(self.dim(), images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(bits: &[u8]) -> Gf2Vector {
        Gf2Vector::from_bits(bits)
    }

    fn span(n: usize, vs: &[&[u8]]) -> Gf2Subspace {
        Gf2Subspace::from_spanning(n, vs.iter().map(|b| v(b))).unwrap()
    }

    #[test]
    fn vector_basics() {
        let mut a = v(&[1, 0, 1]);
        let b = v(&[1, 1, 0]);
        a += &b;
        assert_eq!(a, v(&[0, 1, 1]));
        a += &a.clone();
        assert!(a.is_zero());
        let long = Gf2Vector::from_indices(130, [0, 64, 129]);
        assert_eq!(long.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(long.first_one(), Some(0));
        assert_eq!(long.slice(60, 70).ones().collect::<Vec<_>>(), vec![4, 69]);
        assert!(v(&[1]).checked_add(&v(&[1, 0])).is_err());
    }

    #[test]
    fn solve_identity() {
        let s = solve(&Gf2Matrix::identity(2), &v(&[1, 0])).unwrap().unwrap();
        assert_eq!(s.particular, v(&[1, 0]));
        assert!(s.kernel.is_zero());
    }

    #[test]
    fn solve_underdetermined() {
        let m = Gf2Matrix::from_rows(&[&[1, 1]]).unwrap();
        let s = solve(&m, &v(&[1])).unwrap().unwrap();
        assert_eq!(s.particular, v(&[1, 0]));
        assert_eq!(s.kernel, span(2, &[&[1, 1]]));
    }

    #[test]
    fn solve_inconsistent() {
        let m = Gf2Matrix::from_rows(&[&[1], &[1]]).unwrap();
        assert_eq!(solve(&m, &v(&[1, 0])).unwrap(), None);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let m = Gf2Matrix::identity(2);
        assert!(matches!(
            solve(&m, &v(&[1, 0, 0])),
            Err(Gf2Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn null_space_examples() {
        assert!(null_space(&Gf2Matrix::identity(3)).is_zero());
        assert_eq!(null_space(&Gf2Matrix::zeros(2, 3)), Gf2Subspace::full(3));
        let m = Gf2Matrix::from_rows(&[&[1, 1, 0], &[0, 1, 1]]).unwrap();
        // oracle: the only nonzero x with m·x = 0 among all 8 vectors
        let brute: Vec<Gf2Vector> = (0u8..8)
            .map(|k| v(&[k & 1, (k >> 1) & 1, (k >> 2) & 1]))
            .filter(|x| m.mul_vec(x).unwrap().is_zero() && !x.is_zero())
            .collect();
        assert_eq!(brute, vec![v(&[1, 1, 1])]);
        assert_eq!(null_space(&m), span(3, &[&[1, 1, 1]]));
    }

    #[test]
    fn column_space_examples() {
        assert_eq!(column_space(&Gf2Matrix::identity(3)), Gf2Subspace::full(3));
        assert!(column_space(&Gf2Matrix::zeros(3, 2)).is_zero());
        let m = Gf2Matrix::from_rows(&[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(column_space(&m), span(2, &[&[1, 1]]));
    }

    #[test]
    fn sum_and_intersection_examples() {
        let s = span(2, &[&[1, 0]]);
        let zero = Gf2Subspace::zero(2);
        assert_eq!(s.sum(&zero).unwrap(), s);
        assert_eq!(s.sum(&s).unwrap(), s);
        assert_eq!(
            s.sum(&span(2, &[&[0, 1]])).unwrap(),
            Gf2Subspace::full(2)
        );
        assert_eq!(s.intersection(&Gf2Subspace::full(2)).unwrap(), s);
        assert_eq!(s.intersection(&zero).unwrap(), zero);
        let diag = span(2, &[&[1, 1]]);
        assert_eq!(
            span(2, &[&[1, 0], &[0, 1]]).intersection(&diag).unwrap(),
            diag
        );
        assert!(s.sum(&Gf2Subspace::zero(3)).is_err());
        assert!(s.intersection(&Gf2Subspace::zero(3)).is_err());
    }

    #[test]
    fn membership() {
        let diag = span(2, &[&[1, 1]]);
        assert!(diag.contains(&Gf2Vector::zeros(2)).unwrap());
        assert!(diag.contains(&v(&[1, 1])).unwrap());
        assert!(!diag.contains(&v(&[1, 0])).unwrap());
        assert!(diag.contains(&v(&[1, 0, 0])).is_err());
        let a = Gf2AffineSubspace::new(v(&[1, 0]), diag.clone()).unwrap();
        assert!(a.contains(&v(&[0, 1])).unwrap());
        assert!(!a.contains_zero());
        assert_eq!(a.representative(), &v(&[0, 1]));
        let b = Gf2AffineSubspace::new(v(&[1, 1]), diag).unwrap();
        assert!(b.contains_zero());
    }

    #[test]
    fn canonical_form_is_structural() {
        let a = span(3, &[&[1, 1, 0], &[0, 1, 1]]);
        let b = span(3, &[&[1, 0, 1], &[1, 1, 0]]);
        assert_eq!(a, b);
        assert_eq!(a.pivots(), vec![0, 1]);
    }

    #[test]
    fn quotient_examples() {
        let full = Gf2Subspace::full(2);
        let q = QuotientMap::new(&full, &Gf2Subspace::zero(2)).unwrap();
        assert_eq!(q.apply(&v(&[1, 1])).unwrap(), v(&[1, 1]));
        let q = QuotientMap::new(&full, &full).unwrap();
        assert_eq!(q.dim(), 0);
        let q = QuotientMap::new(&full, &span(2, &[&[1, 1]])).unwrap();
        assert_eq!(q.dim(), 1);
        let x = q.apply(&v(&[1, 0])).unwrap();
        assert_eq!(x, q.apply(&v(&[0, 1])).unwrap());
        assert!(!x.is_zero());
        assert!(QuotientMap::new(&span(2, &[&[1, 0]]), &span(2, &[&[0, 1]])).is_err());
        let q = QuotientMap::new(&span(3, &[&[1, 0, 0]]), &Gf2Subspace::zero(3)).unwrap();
        assert!(q.apply(&v(&[0, 1, 0])).is_err());
    }

    #[test]
    fn preimage_and_image() {
        let m = Gf2Matrix::from_rows(&[&[1, 1, 0], &[0, 0, 1]]).unwrap();
        let target = span(2, &[&[1, 0]]);
        let pre = m.preimage(&target).unwrap();
        for x in Gf2Subspace::full(3).elements() {
            let inside = target.contains(&m.mul_vec(&x).unwrap()).unwrap();
            assert_eq!(pre.contains(&x).unwrap(), inside);
        }
        assert_eq!(m.image_of(&Gf2Subspace::full(3)).unwrap(), Gf2Subspace::full(2));
    }

    #[test]
    fn compose_matches_sequential_application() {
        let a = Gf2Matrix::from_rows(&[&[1, 1], &[0, 1], &[1, 0]]).unwrap();
        let b = Gf2Matrix::from_rows(&[&[0, 1, 1], &[1, 0, 1]]).unwrap();
        let ab = a.compose(&b).unwrap();
        for x in Gf2Subspace::full(3).elements() {
            assert_eq!(
                ab.mul_vec(&x).unwrap(),
                a.mul_vec(&b.mul_vec(&x).unwrap()).unwrap()
            );
        }
    }
}
