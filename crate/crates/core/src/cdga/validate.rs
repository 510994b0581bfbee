use std::fmt;

use serde::Serialize;

use super::PresentedCdga;
use crate::algebra::decompose_homogeneous;
use crate::error::Result;

/// A failed structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    MissingDifferential {
        generator: String,
    },
    /// `found` is `None` when the differential is not homogeneous.
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: Option<u32>,
    },
    DifferentialSquareNonzero {
        generator: String,
        residual: String,
    },
    RelationNotHomogeneous {
        relation: usize,
    },
    RelationDegreeTooLow {
        relation: usize,
        degree: u32,
    },
    IdealNotPreserved {
        relation: usize,
        residual: String,
    },
    ImageDegreeMismatch {
        generator: String,
        expected: u32,
        found: Option<u32>,
    },
    RelationNotMappedToZero {
        relation: usize,
        image: String,
    },
    DifferentialNotCommuting {
        generator: String,
        lhs: String,
        rhs: String,
    },
}

impl Issue {
    /// The generator the issue is about, if any.
    pub fn generator(&self) -> Option<&str> {
        match self {
            Issue::MissingDifferential { generator }
            | Issue::DegreeMismatch { generator, .. }
            | Issue::DifferentialSquareNonzero { generator, .. }
            | Issue::ImageDegreeMismatch { generator, .. }
            | Issue::DifferentialNotCommuting { generator, .. } => Some(generator),
            _ => None,
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::MissingDifferential { generator } => {
                write!(f, "missing differential for generator `{generator}`")
            }
            Issue::DegreeMismatch {
                generator,
                expected,
                found: Some(found),
            } => write!(f, "d({generator}) has degree {found}, expected {expected}"),
            Issue::DegreeMismatch {
                generator,
                expected,
                found: None,
            } => write!(f, "d({generator}) is not homogeneous, expected degree {expected}"),
            Issue::DifferentialSquareNonzero { generator, residual } => {
                write!(f, "d(d({generator})) = {residual}, expected 0")
            }
            Issue::RelationNotHomogeneous { relation } => {
                write!(f, "relation {relation} is not homogeneous")
            }
            Issue::RelationDegreeTooLow { relation, degree } => {
                write!(f, "relation {relation} has degree {degree} < 2")
            }
            Issue::IdealNotPreserved { relation, residual } => {
                write!(f, "d(relation {relation}) leaves the ideal (non-ideal part {residual})")
            }
            Issue::ImageDegreeMismatch {
                generator,
                expected,
                found,
            } => match found {
                Some(found) => write!(f, "image of `{generator}` has degree {found}, expected {expected}"),
                None => write!(
                    f,
                    "image of `{generator}` is not homogeneous, expected degree {expected}"
                ),
            },
            Issue::RelationNotMappedToZero { relation, image } => {
                write!(f, "relation {relation} maps to {image}, expected 0")
            }
            Issue::DifferentialNotCommuting { generator, lhs, rhs } => {
                write!(f, "f(d {generator}) = {lhs} but d(f {generator}) = {rhs}")
            }
        }
    }
}

/// Informational entries that do not fail validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Note {
    /// The prescribed differential changes under quotient reduction.
    DifferentialReduced {
        generator: String,
        prescribed: String,
        reduced: String,
    },
}

impl fmt::Display for Note {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Note::DifferentialReduced {
                generator,
                prescribed,
                reduced,
            } => write!(f, "d({generator}) = {prescribed} reduces to {reduced} in the quotient"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub max_degree: u32,
    pub issues: Vec<Issue>,
    pub notes: Vec<Note>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn has_issue(&self, pred: impl Fn(&Issue) -> bool) -> bool {
        self.issues.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "all checks passed through degree {}", self.max_degree)?;
        } else {
            writeln!(
                f,
                "{} check(s) failed through degree {}",
                self.issues.len(),
                self.max_degree
            )?;
            for issue in &self.issues {
                writeln!(f, "  error: {issue}")?;
            }
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}

/// Checks the CDGA axioms through degree `max_degree`: every differential raises
/// degree by one, `d² = 0` on generators of degree ≤ `max_degree`, and each relation
/// of degree ≤ `max_degree` is sent into the ideal.
pub fn validate(a: &PresentedCdga, max_degree: u32) -> Result<ValidationReport> {
    let table = a.table();
    let free = a.free_part();
    let mut report = ValidationReport {
        max_degree,
        ..Default::default()
    };

    for g in table.iter() {
        let Some(d) = free.differential_of(g.id) else {
            report.issues.push(Issue::MissingDifferential {
                generator: g.name.clone(),
            });
            continue;
        };
        let expected = g.degree + 1;
        if !d.is_zero() && !d.is_homogeneous_of(table, expected) {
            report.issues.push(Issue::DegreeMismatch {
                generator: g.name.clone(),
                expected,
                found: d.degree(table),
            });
        }
        let reduced = a.normal_form(d)?;
        if &reduced != d {
            report.notes.push(Note::DifferentialReduced {
                generator: g.name.clone(),
                prescribed: d.display(table).to_string(),
                reduced: reduced.display(table).to_string(),
            });
        }
    }

    for (index, r) in a.relations().iter().enumerate() {
        match r.degree(table) {
            None => report.issues.push(Issue::RelationNotHomogeneous { relation: index }),
            Some(degree) if degree < 2 => report.issues.push(Issue::RelationDegreeTooLow {
                relation: index,
                degree,
            }),
            _ => {}
        }
    }

    for g in table.iter().filter(|g| g.degree <= max_degree) {
        let dd = a.apply_differential(&a.apply_differential(&crate::algebra::Element::generator(g.id))?)?;
        if !dd.is_zero() {
            report.issues.push(Issue::DifferentialSquareNonzero {
                generator: g.name.clone(),
                residual: dd.display(table).to_string(),
            });
        }
    }

    for (index, r) in a.relations().iter().enumerate() {
        let Some(degree) = r.degree(table) else { continue };
        if degree > max_degree {
            continue;
        }
        let dr = free.differential(r)?;
        for (deg, part) in decompose_homogeneous(&dr, table) {
            let space = a.space(deg)?;
            if !space.in_ideal(&part)? {
                report.issues.push(Issue::IdealNotPreserved {
                    relation: index,
                    residual: space.normal_form(&part)?.display(table).to_string(),
                });
                break;
            }
        }
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Element, GeneratorTable, Monomial};
    use crate::cdga::FreeCdga;

    fn mono(f: Vec<(usize, u32)>) -> Element {
        Element::from_monomial(Monomial::from_canonical(f))
    }

    #[test]
    fn heisenberg_passes() {
        let t = GeneratorTable::from_pairs(&[("a", 1), ("b", 1), ("c", 1)]).unwrap();
        let a = FreeCdga::with_differentials(t, vec![Element::zero(), Element::zero(), mono(vec![(0, 1), (1, 1)])])
            .unwrap()
            .into_presented();
        assert!(validate(&a, 4).unwrap().passed());
    }

    #[test]
    fn missing_differential_is_reported() {
        let t = GeneratorTable::from_pairs(&[("a", 1), ("b", 1), ("c", 1)]).unwrap();
        let mut free = FreeCdga::new(t);
        free.set_differential(0, Element::zero()).unwrap();
        free.set_differential(1, Element::zero()).unwrap();
        let report = validate(&free.into_presented(), 3).unwrap();
        assert_eq!(
            report.issues,
            vec![Issue::MissingDifferential { generator: "c".into() }]
        );
    }

    #[test]
    fn reduction_of_differential_is_documented() {
        // x deg 2, y deg 3, dy = x^2, relation x^2: y becomes a cocycle
        let t = GeneratorTable::from_pairs(&[("x", 2), ("y", 3)]).unwrap();
        let x2 = mono(vec![(0, 2)]);
        let free = FreeCdga::with_differentials(t, vec![Element::zero(), x2.clone()]).unwrap();
        let a = PresentedCdga::new(free, vec![x2]).unwrap();
        let report = validate(&a, 6).unwrap();
        assert!(report.passed());
        assert_eq!(report.notes.len(), 1);
        let Note::DifferentialReduced { generator, reduced, .. } = &report.notes[0];
        assert_eq!(generator, "y");
        assert_eq!(reduced, "0");
    }

    #[test]
    fn degree_mismatch_and_square() {
        // x deg 2, y deg 3 with dy = x (wrong degree)
        let t = GeneratorTable::from_pairs(&[("x", 2), ("y", 3)]).unwrap();
        let free = FreeCdga::with_differentials(t, vec![Element::zero(), Element::generator(0)]).unwrap();
        let report = validate(&free.into_presented(), 5).unwrap();
        assert!(report.has_issue(
            |i| matches!(i, Issue::DegreeMismatch { generator, expected: 4, found: Some(2) } if generator == "y")
        ));
    }

    #[test]
    fn nonzero_square_detected() {
        // dx = w, dy = x^2: d(dy) = 2xw
        let t = GeneratorTable::from_pairs(&[("x", 2), ("w", 3), ("y", 3)]).unwrap();
        let free =
            FreeCdga::with_differentials(t, vec![Element::generator(1), Element::zero(), mono(vec![(0, 2)])]).unwrap();
        let report = validate(&free.into_presented(), 4).unwrap();
        assert!(
            report.has_issue(|i| matches!(i, Issue::DifferentialSquareNonzero { generator, .. } if generator == "y"))
        );
    }

    #[test]
    fn ideal_not_preserved() {
        // a deg 1, x deg 2, dx = 0, da = x; relation x^2: d(x^2) = 0 fine.
        // relation a·x (deg 3): d(ax) = x·x = x^2, not in ideal (ax) in degree 4.
        let t = GeneratorTable::from_pairs(&[("a", 1), ("x", 2)]).unwrap();
        let free = FreeCdga::with_differentials(t, vec![Element::generator(1), Element::zero()]).unwrap();
        let a = PresentedCdga::new(free, vec![mono(vec![(0, 1), (1, 1)])]).unwrap();
        let report = validate(&a, 4).unwrap();
        assert!(report.has_issue(|i| matches!(i, Issue::IdealNotPreserved { relation: 0, .. })));
    }
}
