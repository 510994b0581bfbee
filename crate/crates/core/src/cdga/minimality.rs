use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::{FreeCdga, PresentedCdga};
use crate::error::{Error, Result};

/// Why no degree-monotone well-ordering exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderObstruction {
    /// `generator` depends on a generator of strictly higher degree.
    DegreeInversion { generator: usize, depends_on: usize },
    /// Equal-degree generators depending on each other in a cycle.
    Cycle { generators: Vec<usize> },
}

/// Degree-monotone ordering of `nodes` such that each node comes after its
/// dependencies. Dependencies outside `nodes` count as already placed.
///
/// Nodes are taken degree by degree; inside a degree, ready nodes are emitted in
/// ascending id order.
pub fn layered_order(
    nodes: &[(usize, u32)],
    deps: impl Fn(usize) -> Vec<usize>,
) -> std::result::Result<Vec<usize>, OrderObstruction> {
    let degree_of: BTreeMap<usize, u32> = nodes.iter().copied().collect();
    let mut by_degree: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for &(id, deg) in nodes {
        by_degree.entry(deg).or_default().push(id);
    }
    let mut order = Vec::with_capacity(nodes.len());
    for (&deg, layer) in &by_degree {
        let mut layer_deps: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for &id in layer {
            let mut same = BTreeSet::new();
            for dep in deps(id) {
                match degree_of.get(&dep) {
                    Some(&d) if d > deg => {
                        return Err(OrderObstruction::DegreeInversion {
                            generator: id,
                            depends_on: dep,
                        })
                    }
                    Some(&d) if d == deg => {
                        same.insert(dep);
                    }
                    _ => {}
                }
            }
            layer_deps.insert(id, same);
        }
        let mut placed: BTreeSet<usize> = BTreeSet::new();
        while placed.len() < layer.len() {
            let ready = layer_deps
                .iter()
                .find(|(id, ds)| !placed.contains(id) && ds.iter().all(|d| placed.contains(d)))
                .map(|(&id, _)| id);
            match ready {
                Some(id) => {
                    placed.insert(id);
                    order.push(id);
                }
                None => {
                    return Err(OrderObstruction::Cycle {
                        generators: find_cycle(&layer_deps, &placed),
                    })
                }
            }
        }
    }
    Ok(order)
}

fn find_cycle(deps: &BTreeMap<usize, BTreeSet<usize>>, placed: &BTreeSet<usize>) -> Vec<usize> {
    // every unplaced node has an unplaced dependency, so walking those edges repeats
    let start = *deps.keys().find(|id| !placed.contains(id)).expect("unplaced node");
    let mut path = vec![start];
    let mut current = start;
    loop {
        let next = *deps[&current]
            .iter()
            .find(|d| !placed.contains(d))
            .expect("unplaced dependency");
        if let Some(pos) = path.iter().position(|&p| p == next) {
            let mut cycle = path.split_off(pos);
            // report the cycle starting at its smallest id, following edges
            let min = cycle
                .iter()
                .enumerate()
                .min_by_key(|(_, &id)| id)
                .map(|(i, _)| i)
                .unwrap();
            cycle.rotate_left(min);
            return cycle;
        }
        path.push(next);
        current = next;
    }
}

/// Result of the minimality test on a free CDGA.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalityVerdict {
    /// A degree-monotone well-ordering exists in which every differential only
    /// uses earlier generators.
    pub minimal: bool,
    pub ordering: Option<Vec<usize>>,
    pub obstruction: Option<OrderObstruction>,
    /// `d(V) ⊆ Λ^{≥2} V`: no differential has a linear term.
    pub decomposable: bool,
    /// Generators whose differential has a linear term.
    pub linear_terms: Vec<usize>,
}

impl FreeCdga {
    pub fn minimality(&self) -> MinimalityVerdict {
        let table = self.table();
        let nodes: Vec<(usize, u32)> = table.iter().map(|g| (g.id, g.degree)).collect();
        let result = layered_order(&nodes, |id| self.d_generator(id).support());
        let linear_terms: Vec<usize> = table
            .iter()
            .filter(|g| self.d_generator(g.id).monomials().any(|m| m.word_length() == 1))
            .map(|g| g.id)
            .collect();
        let (minimal, ordering, obstruction) = match result {
            Ok(order) => (true, Some(order), None),
            Err(o) => (false, None, Some(o)),
        };
        MinimalityVerdict {
            minimal,
            ordering,
            obstruction,
            decomposable: linear_terms.is_empty(),
            linear_terms,
        }
    }
}

/// Minimality verdict for a free algebra; presented algebras with relations are rejected.
pub fn check_minimality(a: &PresentedCdga) -> Result<MinimalityVerdict> {
    if !a.is_free() {
        return Err(Error::NotFree);
    }
    Ok(a.free_part().minimality())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{multiply, Element, GeneratorTable, Monomial};

    #[test]
    fn torus_is_minimal() {
        let t = GeneratorTable::from_pairs(&[("a", 1), ("b", 1), ("c", 1)]).unwrap();
        let v = FreeCdga::closed(t).minimality();
        assert!(v.minimal && v.decomposable);
        assert_eq!(v.ordering, Some(vec![0, 1, 2]));
    }

    #[test]
    fn heisenberg_order() {
        let t = GeneratorTable::from_pairs(&[("c", 1), ("a", 1), ("b", 1)]).unwrap();
        let ab = multiply(&Element::generator(1), &Element::generator(2), &t).unwrap();
        let free = FreeCdga::with_differentials(t, vec![ab, Element::zero(), Element::zero()]).unwrap();
        let v = free.minimality();
        assert!(v.minimal);
        assert_eq!(v.ordering, Some(vec![1, 2, 0]));
    }

    #[test]
    fn contractible_is_not_minimal() {
        let t = GeneratorTable::from_pairs(&[("t", 1), ("s", 2)]).unwrap();
        let free = FreeCdga::with_differentials(t, vec![Element::generator(1), Element::zero()]).unwrap();
        let v = free.minimality();
        assert!(!v.minimal);
        assert!(!v.decomposable);
        assert_eq!(v.linear_terms, vec![0]);
        assert_eq!(
            v.obstruction,
            Some(OrderObstruction::DegreeInversion {
                generator: 0,
                depends_on: 1
            })
        );
    }

    #[test]
    fn degree_one_cycle_is_decomposable_but_not_minimal() {
        // u, v, w of degree 1 with du = vw, dv = uw: a dependency cycle without linear terms
        let t = GeneratorTable::from_pairs(&[("u", 1), ("v", 1), ("w", 1)]).unwrap();
        let vw = multiply(&Element::generator(1), &Element::generator(2), &t).unwrap();
        let uw = multiply(&Element::generator(0), &Element::generator(2), &t).unwrap();
        let free = FreeCdga::with_differentials(t, vec![vw, uw, Element::zero()]).unwrap();
        let v = free.minimality();
        assert!(!v.minimal);
        assert!(v.decomposable);
        assert_eq!(v.obstruction, Some(OrderObstruction::Cycle { generators: vec![0, 1] }));
    }

    #[test]
    fn self_dependency_is_a_cycle() {
        // a deg 1, x deg 2 with dx = a·x
        let t = GeneratorTable::from_pairs(&[("a", 1), ("x", 2)]).unwrap();
        let ax = Element::from_monomial(Monomial::from_canonical(vec![(0, 1), (1, 1)]));
        let free = FreeCdga::with_differentials(t, vec![Element::zero(), ax]).unwrap();
        assert_eq!(
            free.minimality().obstruction,
            Some(OrderObstruction::Cycle { generators: vec![1] })
        );
    }

    #[test]
    fn relations_rejected() {
        let t = GeneratorTable::from_pairs(&[("e", 2)]).unwrap();
        let e2 = Element::from_monomial(Monomial::from_canonical(vec![(0, 2)]));
        let a = PresentedCdga::new(FreeCdga::closed(t), vec![e2]).unwrap();
        assert!(matches!(check_minimality(&a), Err(Error::NotFree)));
    }
}
