//! Cycles, boundaries and homology of a validated DGA.

use thiserror::Error;

use crate::dga::{ChainElement, Degree, Dga, DgaError, DgaPresentation};
use crate::gf2::{column_space, null_space, Gf2Error, Gf2Matrix, Gf2Subspace, Gf2Vector, QuotientMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Linear(#[from] Gf2Error),
    #[error("homology in degree {degree} is unavailable at truncation {truncation}")]
    Unavailable { degree: Degree, truncation: u32 },
    #[error("`{element}` is not a cycle: its differential is `{differential}`")]
    NotACycle { element: String, differential: String },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: Degree, right: Degree },
}

#[derive(Debug, Clone)]
pub struct DegreeHomology {
    cycles: Gf2Subspace,
    boundaries: Gf2Subspace,
    classes: QuotientMap,
}

impl DegreeHomology {
    fn new(cycles: Gf2Subspace, boundaries: Gf2Subspace) -> Self {
        let classes = QuotientMap::new(&cycles, &boundaries).expect("boundaries are cycles");
        Self {
            cycles,
            boundaries,
            classes,
        }
    }

    pub fn cycles(&self) -> &Gf2Subspace {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Gf2Subspace {
        &self.boundaries
    }

    pub fn dim(&self) -> usize {
        self.classes.dim()
    }
}

/// `H(A)` in every degree whose cycles and boundaries are determined below
/// the truncation, i.e. `0 ≤ n ≤ N − 1`. Negative degrees are zero.
#[derive(Debug, Clone)]
pub struct HomologyStructure {
    dga: Dga,
    degrees: Vec<DegreeHomology>,
    empty: DegreeHomology,
}

/// A homology class with the cycle that represents it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    degree: Degree,
    coords: Gf2Vector,
    representative: ChainElement,
}

impl HomologyClass {
    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn coords(&self) -> &Gf2Vector {
        &self.coords
    }

    pub fn representative(&self) -> &ChainElement {
        &self.representative
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }
}

pub fn build_homology(p: DgaPresentation) -> Result<HomologyStructure, HomologyError> {
    Ok(HomologyStructure::new(Dga::new(p)?))
}

impl HomologyStructure {
    pub fn new(dga: Dga) -> Self {
        let top = dga.truncation() as Degree;
        let mut degrees = Vec::new();
        for n in 0..top {
            let cycles = null_space(&dga.d_matrix(n).expect("n < truncation"));
            let boundaries = if n == 0 {
                Gf2Subspace::zero(cycles.ambient_dim())
            } else {
                column_space(&dga.d_matrix(n - 1).expect("n - 1 < truncation"))
            };
            degrees.push(DegreeHomology::new(cycles, boundaries));
        }
        Self {
            dga,
            degrees,
            empty: DegreeHomology::new(Gf2Subspace::zero(0), Gf2Subspace::zero(0)),
        }
    }

    pub fn dga(&self) -> &Dga {
        &self.dga
    }

    /// Highest degree with fully determined homology.
    pub fn top_degree(&self) -> Degree {
        self.dga.truncation() as Degree - 1
    }

    pub fn is_available(&self, degree: Degree) -> bool {
        degree <= self.top_degree()
    }

    pub fn degree(&self, degree: Degree) -> Result<&DegreeHomology, HomologyError> {
        if degree < 0 {
            return Ok(&self.empty);
        }
        self.degrees
            .get(degree as usize)
            .ok_or(HomologyError::Unavailable {
                degree,
                truncation: self.dga.truncation(),
            })
    }

    pub fn dim(&self, degree: Degree) -> Result<usize, HomologyError> {
        Ok(self.degree(degree)?.dim())
    }

    /// The cycles chosen as the homology basis, in coordinate order.
    pub fn basis(&self, degree: Degree) -> Result<Vec<ChainElement>, HomologyError> {
        Ok(self
            .degree(degree)?
            .classes
            .complement()
            .iter()
            .map(|v| ChainElement::new(degree, v.clone()))
            .collect())
    }

    pub fn is_cycle(&self, u: &ChainElement) -> Result<bool, HomologyError> {
        Ok(self.degree(u.degree())?.cycles.contains(u.coords())?)
    }

    pub fn is_boundary(&self, u: &ChainElement) -> Result<bool, HomologyError> {
        Ok(self.degree(u.degree())?.boundaries.contains(u.coords())?)
    }

    pub fn class_of(&self, u: &ChainElement) -> Result<HomologyClass, HomologyError> {
        let dh = self.degree(u.degree())?;
        if !dh.cycles.contains(u.coords())? {
            let du = self.dga.differential(u)?;
            return Err(HomologyError::NotACycle {
                element: self.dga.format(u),
                differential: self.dga.format(&du),
            });
        }
        Ok(HomologyClass {
            degree: u.degree(),
            coords: dh.classes.apply(u.coords())?,
            representative: u.clone(),
        })
    }

    /// The class with the given coordinates, represented by the matching
    /// combination of basis cycles.
    pub fn class_from_coords(&self, degree: Degree, coords: &Gf2Vector) -> Result<HomologyClass, HomologyError> {
        let dh = self.degree(degree)?;
        let rep = dh.classes.lift(coords)?;
        Ok(HomologyClass {
            degree,
            coords: coords.clone(),
            representative: ChainElement::new(degree, rep),
        })
    }

    pub fn zero_class(&self, degree: Degree) -> Result<HomologyClass, HomologyError> {
        let n = self.dim(degree)?;
        self.class_from_coords(degree, &Gf2Vector::zeros(n))
    }

    pub fn is_homologous(&self, u: &ChainElement, v: &ChainElement) -> Result<bool, HomologyError> {
        if u.degree() != v.degree() {
            return Err(HomologyError::DegreeMismatch {
                left: u.degree(),
                right: v.degree(),
            });
        }
        let cu = self.class_of(u)?;
        let cv = self.class_of(v)?;
        Ok(cu.coords == cv.coords)
    }

    pub fn product_class(&self, s: &HomologyClass, t: &HomologyClass) -> Result<HomologyClass, HomologyError> {
        let degree = s.degree + t.degree;
        self.degree(degree)?;
        let product = self.dga.multiply(&s.representative, &t.representative)?;
        self.class_of(&product)
    }

    /// Matrix of `x̄ ↦ s̄·x̄` from `H^source` to `H^(source + |s|)`.
    pub fn left_multiplication(&self, s: &HomologyClass, source: Degree) -> Result<Gf2Matrix, HomologyError> {
        let target = source + s.degree;
        let rows = self.dim(target)?;
        let columns = self
            .basis(source)?
            .iter()
            .map(|b| Ok(self.class_of(&self.dga.multiply(&s.representative, b)?)?.coords))
            .collect::<Result<Vec<_>, HomologyError>>()?;
        Ok(Gf2Matrix::from_columns(rows, columns)?)
    }

    /// Matrix of `x̄ ↦ x̄·t̄` from `H^source` to `H^(source + |t|)`.
    pub fn right_multiplication(&self, t: &HomologyClass, source: Degree) -> Result<Gf2Matrix, HomologyError> {
        let target = source + t.degree;
        let rows = self.dim(target)?;
        let columns = self
            .basis(source)?
            .iter()
            .map(|b| Ok(self.class_of(&self.dga.multiply(b, &t.representative)?)?.coords))
            .collect::<Result<Vec<_>, HomologyError>>()?;
        Ok(Gf2Matrix::from_columns(rows, columns)?)
    }

    /// Image in homology coordinates of a subspace of cycles.
    pub fn classes_of_subspace(&self, degree: Degree, cycles: &Gf2Subspace) -> Result<Gf2Subspace, HomologyError> {
        Ok(self.degree(degree)?.classes.image_of(cycles)?)
    }

    pub fn format_class(&self, s: &HomologyClass) -> String {
        if s.is_zero() {
            return "0".to_string();
        }
        format!("[{}]", self.dga.format(&s.representative))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> HomologyStructure {
        let p: DgaPresentation = "dga T\ntruncate 3\ngen x 1\ngen y 1\ngen t 1\nd t = x*y\n"
            .parse()
            .unwrap();
        build_homology(p).unwrap()
    }

    #[test]
    fn dims_and_availability() {
        let h = toy();
        assert_eq!(h.dim(0).unwrap(), 1);
        assert_eq!(h.dim(1).unwrap(), 2);
        assert_eq!(h.dim(-1).unwrap(), 0);
        assert!(matches!(h.dim(3), Err(HomologyError::Unavailable { degree: 3, .. })));
        for n in 0..=h.top_degree() {
            let dh = h.degree(n).unwrap();
            assert!(dh.boundaries().is_subspace_of(dh.cycles()).unwrap());
            assert_eq!(dh.dim(), dh.cycles().dim() - dh.boundaries().dim());
        }
    }

    #[test]
    fn classes_and_products() {
        let h = toy();
        let dga = h.dga();
        let x = h.class_of(&dga.generator("x").unwrap()).unwrap();
        let y = h.class_of(&dga.generator("y").unwrap()).unwrap();
        assert!(!x.is_zero());
        assert!(h.product_class(&x, &y).unwrap().is_zero());
        assert!(!h.product_class(&x, &x).unwrap().is_zero());
        let zero = h.zero_class(1).unwrap();
        assert!(h.product_class(&x, &zero).unwrap().is_zero());
        let err = h.class_of(&dga.generator("t").unwrap()).unwrap_err();
        assert_eq!(
            err,
            HomologyError::NotACycle {
                element: "t".into(),
                differential: "x*y".into()
            }
        );
    }

    #[test]
    fn homologous_and_representatives() {
        let h = toy();
        let dga = h.dga();
        let xy = dga.parse_element("x*y").unwrap();
        assert!(h.is_homologous(&xy, &dga.zero(2).unwrap()).unwrap());
        let x = dga.generator("x").unwrap();
        let y = dga.generator("y").unwrap();
        assert!(h.is_homologous(&x, &x).unwrap());
        assert!(!h.is_homologous(&x, &y).unwrap());
        for b in h.basis(1).unwrap() {
            let c = h.class_of(&b).unwrap();
            assert_eq!(h.class_from_coords(1, c.coords()).unwrap().representative(), &b);
        }
    }

    #[test]
    fn multiplication_matrices_agree_with_products() {
        let h = toy();
        let x = h.class_of(&h.dga().generator("x").unwrap()).unwrap();
        let m = h.left_multiplication(&x, 1).unwrap();
        let r = h.right_multiplication(&x, 1).unwrap();
        for (j, b) in h.basis(1).unwrap().iter().enumerate() {
            let c = h.class_of(b).unwrap();
            let p = h.product_class(&x, &c).unwrap();
            assert_eq!(m.column(j), p.coords());
            assert_eq!(r.column(j), p.coords());
        }
    }
}
