//! JSON-serializable command results and their text rendering. Text output is
//! produced from the same structs, so both formats carry the same numbers.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use sullivan_core::cdga::{OrderObstruction, ValidationReport};
use sullivan_core::minimal_model::StageLog;
use sullivan_core::{
    check_tensor_minimality, check_triangularity, cohomology_summary, rational_homotopy_dims, total_space_dims,
    FreeCdga, GeneratorTable, KsExtension, MinimalModelResult, ModelDescription, PresentedCdga, Result,
    VerificationReport,
};

#[derive(Serialize)]
pub struct ValidateOutput {
    pub name: String,
    #[serde(flatten)]
    pub report: ValidationReport,
    pub passed: bool,
}

impl fmt::Display for ValidateOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model: {}", self.name)?;
        write!(f, "{}", self.report)
    }
}

#[derive(Serialize)]
pub struct GroupOutput {
    pub degree: u32,
    pub betti: usize,
    pub kernel_dim: usize,
    pub image_dim: usize,
    pub representatives: Vec<String>,
}

#[derive(Serialize)]
pub struct CohomologyOutput {
    pub name: String,
    pub max_degree: u32,
    pub betti: Vec<usize>,
    pub groups: Vec<GroupOutput>,
}

impl CohomologyOutput {
    pub fn compute(a: &PresentedCdga, max_degree: u32) -> Result<Self> {
        let summary = cohomology_summary(a, max_degree)?;
        let groups = summary
            .groups
            .iter()
            .map(|g| GroupOutput {
                degree: g.degree(),
                betti: g.betti(),
                kernel_dim: g.kernel_dim(),
                image_dim: g.image_dim(),
                representatives: g.representatives().map(|r| r.display(a.table()).to_string()).collect(),
            })
            .collect();
        Ok(Self {
            name: a.name().to_string(),
            max_degree,
            betti: summary.betti_numbers(),
            groups,
        })
    }
}

impl fmt::Display for CohomologyOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "model: {}", self.name)?;
        writeln!(f, "max degree: {}", self.max_degree)?;
        writeln!(f, "degree  betti  representatives")?;
        for g in &self.groups {
            writeln!(f, "{:>6}  {:>5}  {}", g.degree, g.betti, g.representatives.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct GeneratorOutput {
    pub name: String,
    pub degree: u32,
    pub differential: String,
}

fn generator_list(free: &FreeCdga) -> Vec<GeneratorOutput> {
    let t = free.table();
    t.iter()
        .map(|g| GeneratorOutput {
            name: g.name.clone(),
            degree: g.degree,
            differential: free.d_generator(g.id).display(t).to_string(),
        })
        .collect()
}

fn names(t: &GeneratorTable, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&i| t.name(i).to_string()).collect()
}

#[derive(Serialize)]
pub struct ImageOutput {
    pub generator: String,
    pub image: String,
}

#[derive(Serialize)]
pub struct MinimalityOutput {
    pub minimal: bool,
    pub decomposable: bool,
    pub ordering: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct MinimalModelOutput {
    pub target: String,
    pub max_degree: u32,
    pub kill_cap: usize,
    pub generators: Vec<GeneratorOutput>,
    pub dims: BTreeMap<u32, usize>,
    pub kill_rounds: BTreeMap<u32, usize>,
    pub rho: Vec<ImageOutput>,
    pub minimality: MinimalityOutput,
    pub verification: VerificationReport,
    pub diagnostics: Vec<StageLog>,
    pub model: ModelDescription,
}

impl MinimalModelOutput {
    pub fn new(target: &PresentedCdga, r: &MinimalModelResult, kill_cap: usize) -> Self {
        let t = r.model.table();
        let tt = target.table();
        let model = r
            .model
            .clone()
            .into_presented()
            .with_name(format!("minimal model of {}", target.name()));
        Self {
            target: target.name().to_string(),
            max_degree: r.max_degree,
            kill_cap,
            generators: generator_list(&r.model),
            dims: r.dims.clone(),
            kill_rounds: r.kill_rounds.clone(),
            rho: t
                .iter()
                .map(|g| ImageOutput {
                    generator: g.name.clone(),
                    image: r.rho.image_of(g.id).display(tt).to_string(),
                })
                .collect(),
            minimality: MinimalityOutput {
                minimal: r.minimality.minimal,
                decomposable: r.minimality.decomposable,
                ordering: r.minimality.ordering.as_ref().map(|o| names(t, o)),
            },
            verification: r.verification.clone(),
            diagnostics: r.diagnostics.clone(),
            model: ModelDescription::from_cdga(&model),
        }
    }
}

fn write_dims(out: &mut String, dims: &BTreeMap<u32, usize>) {
    for (k, d) in dims {
        let _ = writeln!(out, "  V^{k}: {d}");
    }
}

impl fmt::Display for MinimalModelOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        let _ = writeln!(s, "target: {}", self.target);
        let _ = writeln!(s, "max degree: {}", self.max_degree);
        let _ = writeln!(s, "kill cap: {}", self.kill_cap);
        let _ = writeln!(s, "generators:");
        for g in &self.generators {
            let _ = writeln!(s, "  {} (degree {}): d = {}", g.name, g.degree, g.differential);
        }
        let _ = writeln!(s, "dims:");
        write_dims(&mut s, &self.dims);
        let _ = writeln!(s, "kill rounds:");
        for (k, n) in &self.kill_rounds {
            let _ = writeln!(s, "  degree {k}: {n}");
        }
        let _ = writeln!(s, "rho:");
        for i in &self.rho {
            let _ = writeln!(s, "  {} -> {}", i.generator, i.image);
        }
        let _ = writeln!(s, "minimal: {}", self.minimality.minimal);
        let _ = writeln!(s, "decomposable: {}", self.minimality.decomposable);
        if let Some(o) = &self.minimality.ordering {
            let _ = writeln!(s, "ordering: {}", o.join(" < "));
        }
        let v = &self.verification;
        let mono = v.mono_at.map_or(String::new(), |m| format!(", mono at {m}"));
        let _ = writeln!(
            s,
            "verification: iso through {}{mono}: {}",
            v.iso_through,
            if v.passed { "passed" } else { "FAILED" }
        );
        for d in &v.degrees {
            let _ = writeln!(
                s,
                "  H^{}: source {} target {} rank {} injective {} surjective {}",
                d.degree, d.source_betti, d.target_betti, d.rank, d.injective, d.surjective
            );
        }
        let _ = writeln!(s, "diagnostics:");
        for stage in &self.diagnostics {
            for g in &stage.added {
                let _ = writeln!(
                    s,
                    "  stage {}: add {} (degree {}) -> {}",
                    stage.stage, g.name, g.degree, g.image
                );
            }
            for k in &stage.kills {
                let _ = writeln!(
                    s,
                    "  stage {}: kill degree {} round {} kernel {}",
                    stage.stage, k.degree, k.round, k.kernel_dim
                );
                for g in &k.added {
                    let _ = writeln!(
                        s,
                        "    {} (degree {}): d = {}, rho = {}",
                        g.name, g.degree, g.differential, g.image
                    );
                }
            }
        }
        f.write_str(&s)
    }
}

#[derive(Serialize)]
pub struct HomotopyOutput {
    pub target: String,
    pub max_degree: u32,
    pub dims: BTreeMap<u32, usize>,
    pub hypotheses: Vec<String>,
}

impl HomotopyOutput {
    pub fn new(target: &PresentedCdga, r: &MinimalModelResult) -> Self {
        let h = rational_homotopy_dims(r);
        Self {
            target: target.name().to_string(),
            max_degree: h.max_degree,
            dims: h.dims,
            hypotheses: h.hypotheses,
        }
    }
}

impl fmt::Display for HomotopyOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "target: {}", self.target)?;
        writeln!(f, "max degree: {}", self.max_degree)?;
        writeln!(f, "dims:")?;
        for (k, d) in &self.dims {
            writeln!(f, "  pi_{k}: {d}")?;
        }
        writeln!(f, "valid under:")?;
        for h in &self.hypotheses {
            writeln!(f, "  - {h}")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct ObstructionOutput {
    pub kind: &'static str,
    pub generators: Vec<String>,
}

fn obstruction(t: &GeneratorTable, o: &OrderObstruction) -> ObstructionOutput {
    match o {
        OrderObstruction::DegreeInversion { generator, depends_on } => ObstructionOutput {
            kind: "degree_inversion",
            generators: names(t, &[*generator, *depends_on]),
        },
        OrderObstruction::Cycle { generators } => ObstructionOutput {
            kind: "cycle",
            generators: names(t, generators),
        },
    }
}

#[derive(Serialize)]
pub struct KsOutput {
    pub generators: Vec<GeneratorOutput>,
    pub fiber_generators: Vec<String>,
    pub triangular: bool,
    pub fiber_order: Option<Vec<String>>,
    pub obstruction: Option<ObstructionOutput>,
    pub base_degree_one: bool,
    pub fiber_simply_connected: bool,
    pub fallback: bool,
    pub minimal: bool,
    pub decomposable: bool,
    pub ordering: Option<Vec<String>>,
    pub general_minimal: bool,
    pub max_degree: u32,
    pub dims: Option<BTreeMap<u32, usize>>,
    pub total: ModelDescription,
}

impl KsOutput {
    pub fn new(e: &KsExtension, max_degree: Option<u32>) -> Result<Self> {
        let t = e.total_table();
        let tri = check_triangularity(e);
        let m = check_tensor_minimality(e);
        let max_degree = max_degree.unwrap_or_else(|| t.max_degree().max(2));
        let dims = if m.minimal() {
            Some(total_space_dims(e, max_degree)?)
        } else {
            None
        };
        let obstruction = match (&tri, &m.verdict.obstruction) {
            (Err(o), _) | (Ok(_), Some(o)) => Some(obstruction(t, o)),
            _ => None,
        };
        Ok(Self {
            generators: generator_list(e.total()),
            fiber_generators: e.fiber_ids().map(|i| t.name(i).to_string()).collect(),
            triangular: tri.is_ok(),
            fiber_order: tri.as_ref().ok().map(|o| names(t, o)),
            obstruction,
            base_degree_one: m.hypotheses.base_degree_one,
            fiber_simply_connected: m.hypotheses.fiber_simply_connected,
            fallback: m.fallback,
            minimal: m.minimal(),
            decomposable: m.verdict.decomposable,
            ordering: m.verdict.ordering.as_ref().map(|o| names(t, o)),
            general_minimal: m.general.minimal,
            max_degree,
            dims,
            total: ModelDescription::from_cdga(&e.total().clone().into_presented().with_name("total space")),
        })
    }

    pub fn passed(&self) -> bool {
        self.triangular && self.minimal
    }
}

impl fmt::Display for KsOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators:")?;
        for g in &self.generators {
            writeln!(f, "  {} (degree {}): D = {}", g.name, g.degree, g.differential)?;
        }
        writeln!(f, "fiber generators: {}", self.fiber_generators.join(", "))?;
        writeln!(f, "triangular: {}", self.triangular)?;
        if let Some(o) = &self.fiber_order {
            writeln!(f, "fiber order: {}", o.join(" < "))?;
        }
        if let Some(o) = &self.obstruction {
            writeln!(f, "obstruction: {} ({})", o.kind, o.generators.join(", "))?;
        }
        writeln!(f, "base generated in degree 1: {}", self.base_degree_one)?;
        writeln!(f, "fiber simply-connected: {}", self.fiber_simply_connected)?;
        writeln!(f, "fallback to general check: {}", self.fallback)?;
        writeln!(f, "minimal: {}", self.minimal)?;
        writeln!(f, "decomposable: {}", self.decomposable)?;
        writeln!(f, "general check minimal: {}", self.general_minimal)?;
        if let Some(o) = &self.ordering {
            writeln!(f, "ordering: {}", o.join(" < "))?;
        }
        writeln!(f, "max degree: {}", self.max_degree)?;
        if let Some(d) = &self.dims {
            let mut s = String::new();
            write_dims(&mut s, d);
            writeln!(f, "dims:")?;
            f.write_str(&s)?;
        }
        Ok(())
    }
}
