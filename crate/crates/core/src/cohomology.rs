//! Degreewise cohomology of presented CDGAs and maps induced by morphisms.
//!
//! Representatives are canonical: the image `B^n` is held in RREF, every kernel
//! vector is reduced against it, and the reduced vectors are row-reduced again.
//! The resulting basis depends only on `Z^n` and `B^n`, not on how they were found.

use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::Element;
use crate::cdga::{homogeneous_part, Morphism, PresentedCdga};
use crate::error::{Error, Result};
use crate::linalg::{rref, solve, RationalMatrix, Subspace};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: u32,
    pub representative: Element,
}

#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    degree: u32,
    kernel_dim: usize,
    image: Subspace,
    representatives: Subspace,
    classes: Vec<CohomologyClass>,
}

impl CohomologyGroup {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn betti(&self) -> usize {
        self.classes.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn image_dim(&self) -> usize {
        self.image.dim()
    }

    pub fn classes(&self) -> &[CohomologyClass] {
        &self.classes
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Element> {
        self.classes.iter().map(|c| &c.representative)
    }

    /// Coordinates of the class of a cocycle (given in quotient coordinates).
    fn coordinates_of_vector(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        self.representatives.coordinates(&self.image.reduce(v))
    }

    /// Coordinates of `[z]` in the class basis; fails if `z` is not a cocycle.
    pub fn class_coordinates(&self, a: &PresentedCdga, z: &Element) -> Result<Vec<Rational>> {
        let z = homogeneous_part(z, a.table(), self.degree).or_else(|_| {
            if z.is_zero() {
                Ok(Element::zero())
            } else {
                Err(Error::Internal(format!("element is not of degree {}", self.degree)))
            }
        })?;
        let v = a.space(self.degree)?.coordinates(&z)?;
        self.coordinates_of_vector(&v).ok_or_else(|| {
            Error::Internal(format!(
                "`{}` is not a cocycle in degree {}",
                z.display(a.table()),
                self.degree
            ))
        })
    }

    /// Whether a cocycle is exact.
    pub fn is_exact(&self, a: &PresentedCdga, z: &Element) -> Result<bool> {
        Ok(self.class_coordinates(a, z)?.iter().all(Zero::is_zero))
    }
}

/// `H^n(A)` with its canonical class basis; memoized on `a`.
pub fn cohomology(a: &PresentedCdga, n: u32) -> Result<Arc<CohomologyGroup>> {
    if let Some(g) = a.cached_cohomology(n) {
        return Ok(g);
    }
    let space = a.space(n)?;
    let dim = space.dim();
    let d_out = a.differential_matrix(n)?;
    let kernel = rref(&d_out).kernel_basis();
    let image = if n == 0 {
        Subspace::zero(dim)
    } else {
        let d_in = a.differential_matrix(n - 1)?;
        let columns: Vec<Vec<Rational>> = (0..d_in.cols()).map(|j| d_in.column(j)).collect();
        Subspace::spanned_by(&columns, dim)
    };
    let reduced: Vec<Vec<Rational>> = kernel.iter().map(|v| image.reduce(v)).collect();
    let representatives = Subspace::spanned_by(&reduced, dim);
    if kernel.len() < image.dim() || representatives.dim() != kernel.len() - image.dim() {
        return Err(Error::Internal(format!(
            "degree {n}: dim ker {} , dim im {}, {} representatives",
            kernel.len(),
            image.dim(),
            representatives.dim()
        )));
    }
    let classes = representatives
        .basis()
        .iter()
        .map(|v| CohomologyClass {
            degree: n,
            representative: space.element(v),
        })
        .collect();
    let group = Arc::new(CohomologyGroup {
        degree: n,
        kernel_dim: kernel.len(),
        image,
        representatives,
        classes,
    });
    Ok(a.store_cohomology(n, group))
}

#[derive(Clone, Debug)]
pub struct CohomologySummary {
    pub groups: Vec<Arc<CohomologyGroup>>,
}

impl CohomologySummary {
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti()).collect()
    }
}

/// Cohomology in every degree `0..=max_degree`.
pub fn cohomology_summary(a: &PresentedCdga, max_degree: u32) -> Result<CohomologySummary> {
    let groups = (0..=max_degree).map(|n| cohomology(a, n)).collect::<Result<Vec<_>>>()?;
    Ok(CohomologySummary { groups })
}

/// `f^*: H^n(source) -> H^n(target)` in the canonical class bases, with kernel
/// (source cocycles) and cokernel (target cocycles spanning a complement of the image).
#[derive(Clone, Debug)]
pub struct InducedMap {
    pub degree: u32,
    pub matrix: RationalMatrix,
    pub rank: usize,
    pub kernel: Vec<Element>,
    pub cokernel: Vec<Element>,
}

impl InducedMap {
    pub fn injective(&self) -> bool {
        self.kernel.is_empty()
    }

    pub fn surjective(&self) -> bool {
        self.cokernel.is_empty()
    }

    pub fn is_iso(&self) -> bool {
        self.injective() && self.surjective()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeStatus {
    pub degree: u32,
    pub source_betti: usize,
    pub target_betti: usize,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl InducedMap {
    pub fn status(&self) -> DegreeStatus {
        DegreeStatus {
            degree: self.degree,
            source_betti: self.matrix.cols(),
            target_betti: self.matrix.rows(),
            rank: self.rank,
            injective: self.injective(),
            surjective: self.surjective(),
        }
    }
}

pub fn induced_map(f: &Morphism, n: u32) -> Result<InducedMap> {
    let src = f.source();
    let tgt = f.target();
    let hs = cohomology(src, n)?;
    let ht = cohomology(tgt, n)?;
    let columns = hs
        .representatives()
        .map(|rep| ht.class_coordinates(tgt, &f.apply(rep)?))
        .collect::<Result<Vec<_>>>()?;
    let matrix = RationalMatrix::from_columns(&columns, ht.betti());
    let reduced = rref(&matrix);

    let kernel = reduced
        .kernel_basis()
        .into_iter()
        .map(|coeffs| {
            hs.representatives()
                .zip(&coeffs)
                .fold(Element::zero(), |acc, (rep, c)| acc + rep.scale(c))
        })
        .collect();

    let image = Subspace::spanned_by(&columns, ht.betti());
    let mut is_pivot = vec![false; ht.betti()];
    for &p in image.pivots() {
        is_pivot[p] = true;
    }
    let cokernel = ht
        .representatives()
        .zip(is_pivot)
        .filter(|(_, pivot)| !pivot)
        .map(|(rep, _)| rep.clone())
        .collect();

    Ok(InducedMap {
        degree: n,
        matrix,
        rank: reduced.rank,
        kernel,
        cokernel,
    })
}

/// Some `e` of degree `n` with `d e = target`, or `None` if `target` is not exact.
/// The solution is the RREF particular solution (free coordinates zero).
pub fn solve_in_degree(a: &PresentedCdga, target: &Element, n: u32) -> Result<Option<Element>> {
    if target.is_zero() {
        return Ok(Some(Element::zero()));
    }
    let target = homogeneous_part(target, a.table(), n + 1)?;
    let rhs = a.space(n + 1)?.coordinates(&target)?;
    let d = a.differential_matrix(n)?;
    solve(&d, &rhs).map(|x| a.space(n).map(|s| s.element(&x))).transpose()
}
