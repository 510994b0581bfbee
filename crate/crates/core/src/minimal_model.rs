//! Degree-by-degree construction of the minimal model of a connected CDGA.
//!
//! Stage `k` holds a free model `M` and a morphism `rho: M -> A` that is an
//! isomorphism on cohomology through degree `k` and injective in degree `k + 1`.
//! Passing to stage `k + 1`:
//!
//! 1. adjoin one closed generator of degree `k + 1` per cokernel class of
//!    `rho^*` in degree `k + 1`, mapped to the class representative;
//! 2. for each kernel class `[z]` of `rho^*` in degree `k + 2`, adjoin `y` of
//!    degree `k + 1` with `dy = z` and `rho(y)` a primitive of `rho(z)`;
//! 3. repeat step 2 until the kernel vanishes. Only degree-1 generators can make
//!    a kill pass create new kernel, so the loop is capped.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{Element, GeneratorTable};
use crate::cdga::{validate_morphism, FreeCdga, MinimalityVerdict, Morphism, PresentedCdga};
use crate::cohomology::{cohomology, induced_map, solve_in_degree, DegreeStatus};
use crate::error::{Error, Result};

pub const DEFAULT_KILL_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AddedGenerator {
    pub name: String,
    pub degree: u32,
    pub differential: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KillRound {
    /// Cohomological degree of the killed classes.
    pub degree: u32,
    pub round: usize,
    pub kernel_dim: usize,
    pub added: Vec<AddedGenerator>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageLog {
    pub stage: u32,
    pub added: Vec<AddedGenerator>,
    pub kills: Vec<KillRound>,
}

/// A partially built model and its map into the target.
#[derive(Clone, Debug)]
pub struct ModelStage {
    rho: Morphism,
    degree: u32,
    kill_rounds: BTreeMap<u32, usize>,
    log: Vec<StageLog>,
}

impl ModelStage {
    /// The ground field `Q` mapping into `target`.
    pub fn initial(target: Arc<PresentedCdga>) -> Self {
        let model = Arc::new(FreeCdga::new(GeneratorTable::new()).into_presented());
        let rho = Morphism::new(model, target, Vec::new()).expect("empty morphism");
        Self {
            rho,
            degree: 0,
            kill_rounds: BTreeMap::new(),
            log: vec![StageLog::default()],
        }
    }

    pub fn model(&self) -> &FreeCdga {
        self.rho.source().free_part()
    }

    pub fn rho(&self) -> &Morphism {
        &self.rho
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn kill_rounds(&self) -> &BTreeMap<u32, usize> {
        &self.kill_rounds
    }

    pub fn log(&self) -> &[StageLog] {
        &self.log
    }

    fn current_log(&mut self, stage: u32) -> &mut StageLog {
        if self.log.last().map(|l| l.stage) != Some(stage) {
            self.log.push(StageLog {
                stage,
                ..Default::default()
            });
        }
        self.log.last_mut().expect("just pushed")
    }

    fn extend(&self, new: Vec<(String, u32, Element, Element)>) -> Result<(Morphism, Vec<AddedGenerator>)> {
        let mut model = self.model().clone();
        let mut images = self.rho.images().to_vec();
        let mut added = Vec::with_capacity(new.len());
        for (name, degree, d, image) in new {
            let (next, _) = model.adjoin(&name, degree, d.clone())?;
            model = next;
            added.push(AddedGenerator {
                name,
                degree,
                differential: d.display(model.table()).to_string(),
                image: image.display(self.rho.target().table()).to_string(),
            });
            images.push(image);
        }
        let source = Arc::new(model.into_presented());
        Ok((Morphism::new(source, self.rho.target().clone(), images)?, added))
    }
}

/// Adjoins closed generators of degree `k1` for a basis of `coker(rho^*)` in degree `k1`.
pub fn add_cohomology(stage: &ModelStage, k1: u32) -> Result<ModelStage> {
    let map = induced_map(&stage.rho, k1)?;
    if !map.injective() {
        return Err(Error::PreconditionViolated(format!(
            "rho^* is not injective in degree {k1} before adding cohomology"
        )));
    }
    let mut next = stage.clone();
    next.degree = k1;
    if map.cokernel.is_empty() {
        next.current_log(k1);
        return Ok(next);
    }
    let new = map
        .cokernel
        .iter()
        .enumerate()
        .map(|(i, rep)| (format!("x_{k1}_{}", i + 1), k1, Element::zero(), rep.clone()))
        .collect();
    let (rho, added) = stage.extend(new)?;
    next.rho = rho;
    next.current_log(k1).added.extend(added);
    Ok(next)
}

fn kill_classes(stage: &ModelStage, k2: u32, kernel: &[Element]) -> Result<ModelStage> {
    let round = stage.kill_rounds.get(&k2).copied().unwrap_or(0) + 1;
    let target = stage.rho.target();
    let mut new = Vec::with_capacity(kernel.len());
    for (i, z) in kernel.iter().enumerate() {
        let image = stage.rho.apply(z)?;
        let primitive = solve_in_degree(target, &image, k2 - 1)?.ok_or_else(|| {
            Error::Internal(format!(
                "kernel class `{}` in degree {k2} has non-exact image",
                z.display(stage.model().table())
            ))
        })?;
        new.push((format!("y_{}_{}_{round}", k2 - 1, i + 1), k2 - 1, z.clone(), primitive));
    }
    let (rho, added) = stage.extend(new)?;
    let mut next = stage.clone();
    next.rho = rho;
    next.kill_rounds.insert(k2, round);
    let stage_no = next.degree;
    next.current_log(stage_no).kills.push(KillRound {
        degree: k2,
        round,
        kernel_dim: kernel.len(),
        added,
    });
    Ok(next)
}

/// One kill pass in degree `k2`: adjoins a primitive for each basis class of
/// `ker(rho^*)` in degree `k2`. Returns the stage unchanged if the kernel is zero.
pub fn kill_kernel(stage: &ModelStage, k2: u32) -> Result<ModelStage> {
    if k2 < 2 {
        return Err(Error::PreconditionViolated(format!("kill degree {k2} < 2")));
    }
    let map = induced_map(&stage.rho, k2)?;
    if map.kernel.is_empty() {
        return Ok(stage.clone());
    }
    kill_classes(stage, k2, &map.kernel)
}

/// Injectivity/surjectivity of `f^*` degree by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Degrees required to be isomorphisms.
    pub iso_through: u32,
    /// Degree required to be injective only, if any.
    pub mono_at: Option<u32>,
    pub degrees: Vec<DegreeStatus>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn status(&self, degree: u32) -> Option<&DegreeStatus> {
        self.degrees.iter().find(|s| s.degree == degree)
    }
}

/// Checks that `f^*` is an isomorphism in degrees `0..=iso_through` and injective
/// in degree `mono_at`.
pub fn verify_truncated(f: &Morphism, iso_through: u32, mono_at: Option<u32>) -> Result<VerificationReport> {
    let mut degrees = Vec::new();
    let mut passed = true;
    for n in 0..=iso_through {
        let s = induced_map(f, n)?.status();
        passed &= s.injective && s.surjective;
        degrees.push(s);
    }
    if let Some(m) = mono_at {
        let s = induced_map(f, m)?.status();
        passed &= s.injective;
        degrees.push(s);
    }
    Ok(VerificationReport {
        iso_through,
        mono_at,
        degrees,
        passed,
    })
}

/// Whether `f` induces isomorphisms on cohomology in all degrees `0..=max_degree`.
pub fn verify_quasi_isomorphism(f: &Morphism, max_degree: u32) -> Result<VerificationReport> {
    verify_truncated(f, max_degree, None)
}

#[derive(Clone, Debug)]
pub struct MinimalModelResult {
    pub model: FreeCdga,
    pub rho: Morphism,
    pub max_degree: u32,
    /// Number of generators of each degree `1..=max_degree`.
    pub dims: BTreeMap<u32, usize>,
    pub kill_rounds: BTreeMap<u32, usize>,
    pub diagnostics: Vec<StageLog>,
    pub verification: VerificationReport,
    pub minimality: MinimalityVerdict,
}

impl MinimalModelResult {
    pub fn generator_count(&self) -> usize {
        self.model.table().len()
    }
}

fn generator_dims(model: &FreeCdga, max_degree: u32) -> BTreeMap<u32, usize> {
    let counts = model.table().degree_counts();
    (1..=max_degree)
        .map(|k| (k, counts.get(&k).copied().unwrap_or(0)))
        .collect()
}

/// Builds the minimal model of `target` with generators in degrees `1..=max_degree`.
///
/// The returned `rho` is verified to be an isomorphism on cohomology through
/// `max_degree` and injective in degree `max_degree + 1`.
pub fn construct_minimal_model(
    target: Arc<PresentedCdga>,
    max_degree: u32,
    kill_cap: usize,
) -> Result<MinimalModelResult> {
    let h0 = cohomology(&target, 0)?.betti();
    if h0 != 1 {
        return Err(Error::NonConnectedTarget(h0));
    }
    let mut stage = ModelStage::initial(target);
    for k in 0..max_degree {
        let k1 = k + 1;
        let k2 = k + 2;
        stage = add_cohomology(&stage, k1)?;
        let mut rounds = 0;
        loop {
            let kernel = induced_map(&stage.rho, k2)?.kernel;
            if kernel.is_empty() {
                break;
            }
            if rounds >= kill_cap {
                return Err(Error::KillCapExceeded {
                    degree: k2,
                    cap: kill_cap,
                    kernel_dim: kernel.len(),
                });
            }
            stage = kill_classes(&stage, k2, &kernel)?;
            rounds += 1;
        }
        let verdict = stage.model().minimality();
        if !verdict.minimal {
            return Err(Error::Internal(format!(
                "stage {k1} model fails the minimality check: {:?}",
                verdict.obstruction
            )));
        }
    }

    let morphism_report = validate_morphism(&stage.rho, max_degree + 1)?;
    if !morphism_report.passed() {
        return Err(Error::Internal(format!(
            "rho is not a CDGA morphism:\n{morphism_report}"
        )));
    }
    let mono_at = (max_degree > 0).then_some(max_degree + 1);
    let verification = verify_truncated(&stage.rho, max_degree, mono_at)?;
    if !verification.passed {
        return Err(Error::Internal(format!(
            "rho fails the quasi-isomorphism check: {:?}",
            verification.degrees
        )));
    }
    let model = stage.model().clone();
    let minimality = model.minimality();
    Ok(MinimalModelResult {
        dims: generator_dims(&model, max_degree),
        model,
        rho: stage.rho.clone(),
        max_degree,
        kill_rounds: stage.kill_rounds.clone(),
        diagnostics: stage.log.clone(),
        verification,
        minimality,
    })
}

/// Standing assumptions under which `dim V^k` equals the rank of `pi_k(X) ⊗ Q`.
pub const HOMOTOPY_HYPOTHESES: &[&str] = &[
    "the input is a model of the rational PL forms of a path-connected space X",
    "X is nilpotent with finitely generated homotopy groups, or more generally each pi_k(X), k >= 2, \
     is a finitely generated nilpotent pi_1(X)-module and the minimal model of K(pi_1(X), 1) \
     has generators in degree 1 only",
    "under these assumptions dim V^k = dim Hom(pi_k(X), Q) for every k >= 2",
    "dimensions are exact for k <= max_degree; generators above max_degree were not computed",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomotopyDims {
    pub max_degree: u32,
    pub dims: BTreeMap<u32, usize>,
    pub hypotheses: Vec<String>,
}

/// `dim V^k` for `2 <= k <= max_degree`, annotated with the topological hypotheses
/// needed to read them as rational homotopy ranks.
pub fn rational_homotopy_dims(r: &MinimalModelResult) -> HomotopyDims {
    HomotopyDims {
        max_degree: r.max_degree,
        dims: r.dims.iter().filter(|(&k, _)| k >= 2).map(|(&k, &d)| (k, d)).collect(),
        hypotheses: HOMOTOPY_HYPOTHESES.iter().map(|s| s.to_string()).collect(),
    }
}
