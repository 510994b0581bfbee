use std::sync::Arc;

use super::validate::{Issue, ValidationReport};
use super::PresentedCdga;
use crate::algebra::{Element, GeneratorTable};
use crate::error::{Error, Result};

/// A CDGA map given by the images of source generators.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: Arc<PresentedCdga>,
    target: Arc<PresentedCdga>,
    images: Vec<Element>,
}

impl Morphism {
    pub fn new(source: Arc<PresentedCdga>, target: Arc<PresentedCdga>, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.table().len() {
            return Err(Error::Internal(format!(
                "{} images given for {} source generators",
                images.len(),
                source.table().len()
            )));
        }
        for img in &images {
            img.check_ids(target.table())?;
        }
        Ok(Self { source, target, images })
    }

    pub fn identity(a: Arc<PresentedCdga>) -> Self {
        let images = (0..a.table().len()).map(Element::generator).collect();
        Self {
            source: a.clone(),
            target: a,
            images,
        }
    }

    pub fn source(&self) -> &Arc<PresentedCdga> {
        &self.source
    }

    pub fn target(&self) -> &Arc<PresentedCdga> {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn image_of(&self, id: usize) -> &Element {
        &self.images[id]
    }

    /// Image of an element, in the target's normal form.
    pub fn apply(&self, e: &Element) -> Result<Element> {
        e.check_ids(self.source.table())?;
        let table: &GeneratorTable = self.target.table();
        let mut out = Element::zero();
        for (m, c) in e.terms() {
            let mut acc = Element::one();
            for &(id, exp) in m.factors() {
                for _ in 0..exp {
                    acc = crate::algebra::multiply(&acc, &self.images[id], table)?;
                }
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc.scale(c);
        }
        self.target.normal_form(&out)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        let images = self
            .images
            .iter()
            .map(|img| next.apply(img))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(self.source.clone(), next.target.clone(), images)
    }
}

/// Checks degree preservation, vanishing of relations and `f∘d = d∘f` on generators
/// of degree ≤ `max_degree`.
pub fn validate_morphism(f: &Morphism, max_degree: u32) -> Result<ValidationReport> {
    let src = f.source();
    let tgt = f.target();
    let stable = src.table();
    let ttable = tgt.table();
    let mut report = ValidationReport {
        max_degree,
        ..Default::default()
    };

    for g in stable.iter().filter(|g| g.degree <= max_degree) {
        let img = f.image_of(g.id);
        if !img.is_zero() && !img.is_homogeneous_of(ttable, g.degree) {
            report.issues.push(Issue::ImageDegreeMismatch {
                generator: g.name.clone(),
                expected: g.degree,
                found: img.degree(ttable),
            });
        }
    }

    for (index, r) in src.relations().iter().enumerate() {
        if r.degree(stable).is_some_and(|d| d > max_degree) {
            continue;
        }
        let image = f.apply(r)?;
        if !image.is_zero() {
            report.issues.push(Issue::RelationNotMappedToZero {
                relation: index,
                image: image.display(ttable).to_string(),
            });
        }
    }

    for g in stable.iter().filter(|g| g.degree <= max_degree) {
        let lhs = f.apply(&src.apply_differential(&Element::generator(g.id))?)?;
        let rhs = tgt.apply_differential(f.image_of(g.id))?;
        if lhs != rhs {
            report.issues.push(Issue::DifferentialNotCommuting {
                generator: g.name.clone(),
                lhs: lhs.display(ttable).to_string(),
                rhs: rhs.display(ttable).to_string(),
            });
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{multiply, GeneratorTable};
    use crate::cdga::FreeCdga;

    fn torus2() -> Arc<PresentedCdga> {
        let t = GeneratorTable::from_pairs(&[("a", 1), ("b", 1)]).unwrap();
        Arc::new(FreeCdga::closed(t).into_presented())
    }

    fn heisenberg() -> Arc<PresentedCdga> {
        let t = GeneratorTable::from_pairs(&[("a", 1), ("b", 1), ("c", 1)]).unwrap();
        let ab = multiply(&Element::generator(0), &Element::generator(1), &t).unwrap();
        Arc::new(
            FreeCdga::with_differentials(t, vec![Element::zero(), Element::zero(), ab])
                .unwrap()
                .into_presented(),
        )
    }

    #[test]
    fn identity_passes() {
        let h = heisenberg();
        assert!(validate_morphism(&Morphism::identity(h), 3).unwrap().passed());
    }

    #[test]
    fn projection_killing_c_fails() {
        let f = Morphism::new(
            heisenberg(),
            torus2(),
            vec![Element::generator(0), Element::generator(1), Element::zero()],
        )
        .unwrap();
        let report = validate_morphism(&f, 3).unwrap();
        assert_eq!(report.issues.len(), 1);
        assert_eq!(report.issues[0].generator(), Some("c"));
    }

    #[test]
    fn inclusion_passes() {
        let f = Morphism::new(
            torus2(),
            heisenberg(),
            vec![Element::generator(0), Element::generator(1)],
        )
        .unwrap();
        assert!(validate_morphism(&f, 3).unwrap().passed());
    }
}
