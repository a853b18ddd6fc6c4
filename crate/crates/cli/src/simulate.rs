//! Batch simulation of a measurement-sequence spec file: runs the chain
//! many times, logs the records, and compares per-step empirical
//! distributions against the exact chain computed from transition matrices.

use serde::{Deserialize, Serialize};

use modality_engine::contexts::Context;
use modality_engine::error::{Error, Result};
use modality_engine::linalg::{Complex64, RankOneProjector};
use modality_engine::measurement::{
    empirical_distribution_sized, goodness_of_fit, run_sequence, MeasurementRecord, RandomStream,
    SystemState,
};
use modality_engine::probability::{born_probability, transition_matrix, DensityMatrix};

/// On-disk sequence spec: `{dimension, initial, contexts, trials, seed}`.
/// `trials` and `seed` fall back to the CLI configuration when omitted.
#[derive(Debug, Deserialize)]
pub struct SimulateSpec {
    pub dimension: usize,
    pub initial: InitialState,
    pub contexts: Vec<Context>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialState {
    /// Outcome `index` of `contexts[context]`, i.e. a previously obtained
    /// modality.
    Modality { context: usize, index: usize },
    /// Explicit state vector as `[re, im]` pairs.
    Modal { vector: Vec<[f64; 2]> },
    MaximallyMixed,
}

#[derive(Debug, Serialize)]
pub struct StepComparison {
    pub step: usize,
    pub context_id: String,
    pub exact: Vec<f64>,
    pub empirical: Vec<f64>,
    pub tv_distance: f64,
    pub chi_square: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct SimulateOutcome {
    pub steps: Vec<StepComparison>,
    pub pass: bool,
    #[serde(skip)]
    pub records: Vec<MeasurementRecord>,
}

fn build_initial(spec: &SimulateSpec) -> Result<SystemState> {
    match &spec.initial {
        InitialState::Modality { context, index } => {
            let ctx = spec.contexts.get(*context).ok_or_else(|| {
                Error::InvalidParameter(format!("initial context index {context} out of range"))
            })?;
            if *index >= ctx.dim() {
                return Err(Error::InvalidParameter(format!(
                    "initial modality index {index} out of range"
                )));
            }
            Ok(SystemState::Modal(ctx.projector(*index).clone()))
        }
        InitialState::Modal { vector } => {
            let v: Vec<Complex64> = vector
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect();
            Ok(SystemState::Modal(RankOneProjector::from_vector(&v)?))
        }
        InitialState::MaximallyMixed => {
            Ok(SystemState::Mixed(DensityMatrix::maximally_mixed(spec.dimension)?))
        }
    }
}

/// Exact per-step marginals of the chain: the Born distribution over the
/// first context, then repeated multiplication by transition matrices.
fn exact_chain(spec: &SimulateSpec, initial: &SystemState) -> Result<Vec<Vec<f64>>> {
    let first = &spec.contexts[0];
    let mut current: Vec<f64> = match initial {
        SystemState::Modal(p) => first
            .projectors()
            .iter()
            .map(|q| modality_engine::probability::pure_born_probability(p, q))
            .collect::<Result<_>>()?,
        SystemState::Mixed(rho) => first
            .projectors()
            .iter()
            .map(|q| born_probability(rho, q))
            .collect::<Result<_>>()?,
    };
    let mut out = vec![current.clone()];
    for pair in spec.contexts.windows(2) {
        let t = transition_matrix(&pair[0], &pair[1])?;
        let next: Vec<f64> = (0..t.dim())
            .map(|k| (0..t.dim()).map(|m| current[m] * t.entry(m, k)).sum())
            .collect();
        out.push(next.clone());
        current = next;
    }
    Ok(out)
}

pub fn run(spec: &SimulateSpec, trials: u64, seed: u64) -> Result<SimulateOutcome> {
    if spec.contexts.is_empty() {
        return Err(Error::InvalidParameter("spec has no contexts".into()));
    }
    for ctx in &spec.contexts {
        if ctx.dim() != spec.dimension {
            return Err(Error::DimensionMismatch(ctx.dim(), spec.dimension));
        }
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let initial = build_initial(spec)?;
    let exact = exact_chain(spec, &initial)?;

    let mut rng = RandomStream::new(seed, 0);
    let mut records = Vec::with_capacity(spec.contexts.len() * trials as usize);
    for _ in 0..trials {
        records.extend(run_sequence(&initial, &spec.contexts, &mut rng)?);
    }

    let mut steps = Vec::with_capacity(spec.contexts.len());
    let mut pass = true;
    for (step, ctx) in spec.contexts.iter().enumerate() {
        let empirical = empirical_distribution_sized(&records, step, spec.dimension)?;
        let gof = goodness_of_fit(&empirical, &exact[step], trials)?;
        pass &= gof.pass;
        steps.push(StepComparison {
            step,
            context_id: ctx.context_id(),
            exact: exact[step].clone(),
            empirical,
            tv_distance: gof.tv_distance,
            chi_square: gof.chi_square,
            pass: gof.pass,
        });
    }
    Ok(SimulateOutcome {
        steps,
        pass,
        records,
    })
}
