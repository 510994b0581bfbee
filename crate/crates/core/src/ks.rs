//! Twisted tensor products `(M_B ⊗ M_F, D)` of minimal algebras: triangularity of
//! the twist, minimality of the tensor, and generator counts of the total space.
//!
//! Only the stated algebraic conditions are checked (`D` extends `d_B`, `D² = 0`,
//! triangularity); nothing is inferred about an underlying fibration.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::algebra::{Element, GeneratorTable};
use crate::cdga::{layered_order, validate, FreeCdga, MinimalityVerdict, OrderObstruction, PresentedCdga};
use crate::error::{Error, Result};
use crate::format::{parse_expression, TwistDescription};
use crate::library::joined_table;

#[derive(Clone, Debug, PartialEq)]
pub struct KsExtension {
    base: FreeCdga,
    fiber: FreeCdga,
    /// Base generators first (same ids), then fiber generators shifted by `offset`.
    total: FreeCdga,
    offset: usize,
}

impl KsExtension {
    /// `fiber_differentials[i]` is `D` of fiber generator `i`, written over the
    /// joined table (see [`KsExtension::total_table`]).
    pub fn new(base: FreeCdga, fiber: FreeCdga, fiber_differentials: Vec<Element>) -> Result<Self> {
        for (part, label) in [(&base, "base"), (&fiber, "fiber")] {
            let v = part.minimality();
            if !v.minimal {
                return Err(Error::InvalidExtension(format!("{label} is not minimal")));
            }
        }
        if fiber_differentials.len() != fiber.table().len() {
            return Err(Error::InvalidExtension(format!(
                "{} fiber differentials given for {} fiber generators",
                fiber_differentials.len(),
                fiber.table().len()
            )));
        }
        let (table, offset) = joined_table(base.table(), fiber.table())?;
        let mut total = FreeCdga::new(table.clone());
        for g in base.table().iter() {
            total.set_differential(g.id, base.d_generator(g.id))?;
        }
        for (i, d) in fiber_differentials.into_iter().enumerate() {
            d.check_ids(&table)?;
            total.set_differential(i + offset, d)?;
        }
        let report = validate(&total.clone().into_presented(), table.max_degree())?;
        if !report.passed() {
            return Err(Error::InvalidExtension(report.to_string()));
        }
        Ok(Self {
            base,
            fiber,
            total,
            offset,
        })
    }

    /// `D = d_B ⊗ 1 + 1 ⊗ d_F`.
    pub fn untwisted(base: FreeCdga, fiber: FreeCdga) -> Result<Self> {
        let (table, offset) = joined_table(base.table(), fiber.table())?;
        let diffs = fiber
            .table()
            .iter()
            .map(|g| fiber.d_generator(g.id).relabel(|i| i + offset, &table))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, fiber, diffs)
    }

    /// Builds the extension from descriptions. Twist expressions use the joined
    /// names; fiber generators absent from the twist keep their fiber differential.
    pub fn from_descriptions(base: &PresentedCdga, fiber: &PresentedCdga, twist: &TwistDescription) -> Result<Self> {
        if !base.is_free() || !fiber.is_free() {
            return Err(Error::NotFree);
        }
        let (base, fiber) = (base.free_part().clone(), fiber.free_part().clone());
        let (table, offset) = joined_table(base.table(), fiber.table())?;
        let mut diffs = fiber
            .table()
            .iter()
            .map(|g| fiber.d_generator(g.id).relabel(|i| i + offset, &table))
            .collect::<Result<Vec<_>>>()?;
        for (name, text) in &twist.differential {
            let id = table
                .id_of(name)
                .ok_or_else(|| Error::UnknownGeneratorName(name.clone()))?;
            if id < offset {
                return Err(Error::InvalidExtension(format!(
                    "`{name}` is a base generator; its differential is fixed by the base"
                )));
            }
            diffs[id - offset] = parse_expression(text, &table, &format!("twist differential of `{name}`"))?;
        }
        Self::new(base, fiber, diffs)
    }

    pub fn base(&self) -> &FreeCdga {
        &self.base
    }

    pub fn fiber(&self) -> &FreeCdga {
        &self.fiber
    }

    /// The tensor algebra with the twisted differential.
    pub fn total(&self) -> &FreeCdga {
        &self.total
    }

    pub fn total_table(&self) -> &GeneratorTable {
        self.total.table()
    }

    /// Ids (in the joined table) of the fiber generators.
    pub fn fiber_ids(&self) -> std::ops::Range<usize> {
        self.offset..self.total.table().len()
    }

    pub fn is_base_id(&self, id: usize) -> bool {
        id < self.offset
    }
}

/// Degree-monotone order on fiber generators with each `D(v)` in the subalgebra
/// generated by the base and earlier fiber generators. Ids are in the joined table.
pub fn check_triangularity(e: &KsExtension) -> std::result::Result<Vec<usize>, OrderObstruction> {
    let table = e.total_table();
    let nodes: Vec<(usize, u32)> = e.fiber_ids().map(|id| (id, table.degree(id))).collect();
    layered_order(&nodes, |id| e.total.d_generator(id).support())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    /// Every base generator has degree 1.
    pub base_degree_one: bool,
    /// No fiber generator has degree at most 1.
    pub fiber_simply_connected: bool,
}

impl Hypotheses {
    pub fn hold(&self) -> bool {
        self.base_degree_one && self.fiber_simply_connected
    }

    /// Human-readable names of the failing hypotheses.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.base_degree_one {
            out.push("base not generated in degree 1");
        }
        if !self.fiber_simply_connected {
            out.push("fiber not simply-connected");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorMinimality {
    pub hypotheses: Hypotheses,
    /// The general check was used because a hypothesis failed.
    pub fallback: bool,
    pub triangular_order: Option<Vec<usize>>,
    /// The reported verdict; under the hypotheses its ordering is the base order
    /// followed by the triangular fiber order.
    pub verdict: MinimalityVerdict,
    /// The independent minimality check on the tensor.
    pub general: MinimalityVerdict,
}

impl TensorMinimality {
    pub fn minimal(&self) -> bool {
        self.verdict.minimal
    }
}

pub fn check_tensor_minimality(e: &KsExtension) -> TensorMinimality {
    let table = e.total_table();
    let hypotheses = Hypotheses {
        base_degree_one: e.base.table().iter().all(|g| g.degree == 1),
        fiber_simply_connected: e.fiber.table().iter().all(|g| g.degree >= 2),
    };
    let triangular = check_triangularity(e);
    let general = e.total.minimality();
    let triangular_order = triangular.as_ref().ok().cloned();
    if !hypotheses.hold() {
        return TensorMinimality {
            hypotheses,
            fallback: true,
            triangular_order,
            verdict: general.clone(),
            general,
        };
    }
    let verdict = match triangular {
        Err(obstruction) => MinimalityVerdict {
            minimal: false,
            ordering: None,
            obstruction: Some(obstruction),
            decomposable: general.decomposable,
            linear_terms: general.linear_terms.clone(),
        },
        Ok(fiber_order) => {
            let mut order = e
                .base
                .minimality()
                .ordering
                .expect("base checked minimal at construction");
            order.extend(fiber_order);
            let mut placed = HashSet::new();
            let mut obstruction = None;
            for &id in &order {
                if let Some(dep) = e
                    .total
                    .d_generator(id)
                    .support()
                    .into_iter()
                    .find(|d| !placed.contains(d))
                {
                    obstruction = Some(if table.degree(dep) > table.degree(id) {
                        OrderObstruction::DegreeInversion {
                            generator: id,
                            depends_on: dep,
                        }
                    } else {
                        OrderObstruction::Cycle {
                            generators: vec![id, dep],
                        }
                    });
                    break;
                }
                placed.insert(id);
            }
            MinimalityVerdict {
                minimal: obstruction.is_none(),
                ordering: obstruction.is_none().then_some(order),
                obstruction,
                decomposable: general.decomposable,
                linear_terms: general.linear_terms.clone(),
            }
        }
    };
    TensorMinimality {
        hypotheses,
        fallback: false,
        triangular_order,
        verdict,
        general,
    }
}

/// `dim V^k` of the total space for `2 <= k <= max_degree`, read off the
/// generators of the (minimal) tensor.
pub fn total_space_dims(e: &KsExtension, max_degree: u32) -> Result<BTreeMap<u32, usize>> {
    if !check_tensor_minimality(e).minimal() {
        return Err(Error::NotMinimal);
    }
    let counts = e.total_table().degree_counts();
    Ok((2..=max_degree)
        .map(|k| (k, counts.get(&k).copied().unwrap_or(0)))
        .collect())
}
