//! Seeded stochastic simulation of sequential contextual measurements.
//!
//! A measurement of a context on a system returns exactly one modality,
//! sampled with its Born probability; the post-measurement state is the
//! outcome projector (ideal, instantaneous repetition — no decoherence or
//! dead time). Repeating the same context therefore reproduces the outcome
//! with certainty, while a context change makes the result irreducibly
//! random.
//!
//! A single run is strictly sequential (the state is threaded); independent
//! runs parallelize with distinct `stream_id`s, never sharing one
//! [`RandomStream`].

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::contexts::{Context, Modality};
use crate::error::{Error, Result};
use crate::linalg::RankOneProjector;
use crate::probability::{born_probability, pure_born_probability, DensityMatrix};
use crate::tolerances::{CDF_ZERO, CHI_SQUARE_SIGNIFICANCE, TOL_EXTRA};

/// Counter-based deterministic random stream: identical (seed, stream_id)
/// reproduce identical draw sequences.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    counter: u64,
    rng: ChaCha12Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            counter: 0,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of draws made so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Fresh stream with the same seed and a different stream id; does not
    /// disturb this stream's state.
    pub fn derive(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    /// Uniform draw in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        self.counter += 1;
        // 53 random mantissa bits, the standard uniform construction.
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.counter += 1;
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.counter += 1;
        self.rng.fill_bytes(dest)
    }
}

/// State of the measured system: either a modality's projector (the finest
/// physical description) or a density matrix such as an unpolarized source.
#[derive(Debug, Clone)]
pub enum SystemState {
    Modal(RankOneProjector),
    Mixed(DensityMatrix),
}

impl SystemState {
    pub fn dim(&self) -> usize {
        match self {
            SystemState::Modal(p) => p.dim(),
            SystemState::Mixed(rho) => rho.dim(),
        }
    }
}

/// One measurement event in a simulated sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub step: usize,
    pub context_id: String,
    pub modality_index: usize,
    pub label: f64,
    /// The Born probability the outcome was sampled from.
    pub probability_assigned: f64,
}

/// Measure one context on the system: samples one modality with its Born
/// probability (inverse CDF over the outcomes in fixed order, one uniform
/// draw), collapses the state onto the outcome projector, and records the
/// event.
///
/// A Modal state aligned with one of the context's projectors (within the
/// extravalence tolerance) yields that outcome with probability exactly 1;
/// the single draw is still consumed.
pub fn measure<'c>(
    state: &SystemState,
    context: &'c Context,
    rng: &mut RandomStream,
) -> Result<(Modality<'c>, SystemState, MeasurementRecord)> {
    if state.dim() != context.dim() {
        return Err(Error::DimensionMismatch(state.dim(), context.dim()));
    }
    let u = rng.next_f64();

    let outcome;
    let assigned;
    let aligned = match state {
        SystemState::Modal(p) => {
            let mut found = None;
            for (k, q) in context.projectors().iter().enumerate() {
                if p.frobenius_distance(q)? < TOL_EXTRA {
                    found = Some(k);
                    break;
                }
            }
            found
        }
        SystemState::Mixed(_) => None,
    };

    if let Some(k) = aligned {
        outcome = k;
        assigned = 1.0;
    } else {
        let mut weights = Vec::with_capacity(context.dim());
        for q in context.projectors() {
            let p = match state {
                SystemState::Modal(p) => pure_born_probability(p, q)?,
                SystemState::Mixed(rho) => born_probability(rho, q)?,
            };
            weights.push(if p < CDF_ZERO { 0.0 } else { p });
        }
        let mut chosen = None;
        let mut cumulative = 0.0;
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            cumulative += w;
            chosen = Some(k);
            if u < cumulative {
                break;
            }
        }
        outcome = chosen.ok_or_else(|| {
            Error::Certification("Born weights summed to zero over a complete context".into())
        })?;
        assigned = weights[outcome];
    }

    let modality = context.modality(outcome)?;
    let new_state = SystemState::Modal(context.projector(outcome).clone());
    let record = MeasurementRecord {
        step: 0,
        context_id: context.context_id(),
        modality_index: outcome,
        label: modality.label(),
        probability_assigned: assigned,
    };
    Ok((modality, new_state, record))
}

/// Fold [`measure`] over an ordered list of contexts, threading the state.
/// Deterministic given the stream's (seed, stream_id).
pub fn run_sequence(
    initial: &SystemState,
    contexts: &[Context],
    rng: &mut RandomStream,
) -> Result<Vec<MeasurementRecord>> {
    let mut state = initial.clone();
    let mut records = Vec::with_capacity(contexts.len());
    for (step, context) in contexts.iter().enumerate() {
        let (_, next, mut record) = measure(&state, context, rng)?;
        record.step = step;
        records.push(record);
        state = next;
    }
    Ok(records)
}

/// Frequency vector over modality indices at one step of a record set,
/// sized to the largest index seen. The rounding residue of the integer
/// divisions is folded into the largest bin so the vector sums to exactly 1.
pub fn empirical_distribution(records: &[MeasurementRecord], step: usize) -> Result<Vec<f64>> {
    let max_index = records
        .iter()
        .filter(|r| r.step == step)
        .map(|r| r.modality_index)
        .max()
        .ok_or_else(|| Error::EmptySelection(format!("no records at step {step}")))?;
    empirical_distribution_sized(records, step, max_index + 1)
}

/// Frequency vector over modality indices at one step, with a fixed number
/// of outcome slots.
pub fn empirical_distribution_sized(
    records: &[MeasurementRecord],
    step: usize,
    dim: usize,
) -> Result<Vec<f64>> {
    let mut counts = vec![0u64; dim];
    let mut total = 0u64;
    for r in records.iter().filter(|r| r.step == step) {
        if r.modality_index >= dim {
            return Err(Error::InvalidParameter(format!(
                "record index {} exceeds dimension {dim}",
                r.modality_index
            )));
        }
        counts[r.modality_index] += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::EmptySelection(format!("no records at step {step}")));
    }
    let mut freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let sum: f64 = freqs.iter().sum();
    if sum != 1.0 {
        let largest = counts
            .iter()
            .enumerate()
            .max_by_key(|(_, &c)| c)
            .map(|(i, _)| i)
            .unwrap_or(0);
        freqs[largest] += 1.0 - sum;
    }
    Ok(freqs)
}

/// Agreement between an empirical and an exact distribution.
#[derive(Debug, Clone, Serialize)]
pub struct GoodnessOfFit {
    /// Half the L1 distance.
    pub tv_distance: f64,
    pub chi_square: f64,
    pub degrees_of_freedom: usize,
    pub chi_square_critical: f64,
    pub significance: f64,
    pub pass: bool,
}

/// Total-variation distance and Pearson chi-square test of an empirical
/// frequency vector against the exact distribution, at significance
/// [`CHI_SQUARE_SIGNIFICANCE`].
pub fn goodness_of_fit(
    empirical: &[f64],
    exact: &[f64],
    num_trials: u64,
) -> Result<GoodnessOfFit> {
    if empirical.len() != exact.len() {
        return Err(Error::LengthMismatch(empirical.len(), exact.len()));
    }
    if num_trials == 0 {
        return Err(Error::InvalidParameter("num_trials must be >= 1".into()));
    }
    let tv_distance = empirical
        .iter()
        .zip(exact)
        .map(|(e, x)| (e - x).abs())
        .sum::<f64>()
        / 2.0;

    let t = num_trials as f64;
    let mut chi_square = 0.0;
    for (e, x) in empirical.iter().zip(exact) {
        let observed = e * t;
        let expected = x * t;
        if expected <= 0.0 {
            if observed > 1e-9 {
                chi_square = f64::INFINITY;
                break;
            }
            continue;
        }
        chi_square += (observed - expected).powi(2) / expected;
    }

    let degrees_of_freedom = empirical.len().saturating_sub(1);
    let (chi_square_critical, pass) = if degrees_of_freedom == 0 {
        (0.0, tv_distance < 1e-12)
    } else {
        let dist = ChiSquared::new(degrees_of_freedom as f64)
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
        let critical = dist.inverse_cdf(1.0 - CHI_SQUARE_SIGNIFICANCE);
        (critical, chi_square <= critical)
    };

    Ok(GoodnessOfFit {
        tv_distance,
        chi_square,
        degrees_of_freedom,
        chi_square_critical,
        significance: CHI_SQUARE_SIGNIFICANCE,
        pass,
    })
}

/// JSON Lines rendering, one record per line.
pub fn records_to_json_lines(records: &[MeasurementRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serialization cannot fail"));
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV rendering with columns (step, context_id, index, label,
/// probability_assigned).
pub fn records_to_csv(records: &[MeasurementRecord]) -> String {
    let mut out = String::from("step,context_id,index,label,probability_assigned\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.step,
            csv_field(&r.context_id),
            r.modality_index,
            r.label,
            r.probability_assigned
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contexts::{context_from_unitary, spin_context};
    use crate::linalg::haar_random_unitary;
    use crate::probability::transition_matrix;

    fn tv(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0
    }

    #[test]
    fn repeatability_over_random_contexts() {
        let mut rng = RandomStream::new(7, 0);
        for k in 0..1000u64 {
            let ctx = context_from_unitary(&haar_random_unitary(4, k).unwrap(), None).unwrap();
            let index = (k % 4) as usize;
            let state = SystemState::Modal(ctx.projector(index).clone());
            let (m, post, record) = measure(&state, &ctx, &mut rng).unwrap();
            assert_eq!(m.index(), index);
            assert_eq!(record.probability_assigned, 1.0);
            match post {
                SystemState::Modal(p) => {
                    assert_eq!(p.vector(), ctx.projector(index).vector());
                }
                _ => panic!("post state must be modal"),
            }
        }
    }

    #[test]
    fn unbiased_context_gives_half_half() {
        let z = spin_context(0.5, [0.0, 0.0, 1.0]).unwrap();
        let x = spin_context(0.5, [1.0, 0.0, 0.0]).unwrap();
        let state = SystemState::Modal(z.projector(0).clone());
        let mut rng = RandomStream::new(42, 0);
        let trials = 10_000;
        let mut records = Vec::with_capacity(trials);
        for _ in 0..trials {
            let (_, _, r) = measure(&state, &x, &mut rng).unwrap();
            records.push(r);
        }
        let emp = empirical_distribution(&records, 0).unwrap();
        let bound = 5.0 * (2.0 / trials as f64).sqrt();
        assert!(tv(&emp, &[0.5, 0.5]) < bound);
    }

    #[test]
    fn maximally_mixed_is_uniform_in_any_context() {
        let ctx = context_from_unitary(&haar_random_unitary(3, 5).unwrap(), None).unwrap();
        let state = SystemState::Mixed(DensityMatrix::maximally_mixed(3).unwrap());
        let mut rng = RandomStream::new(3, 1);
        let trials = 10_000;
        let mut records = Vec::with_capacity(trials);
        for _ in 0..trials {
            let (_, _, r) = measure(&state, &ctx, &mut rng).unwrap();
            records.push(r);
        }
        let emp = empirical_distribution_sized(&records, 0, 3).unwrap();
        let uniform = vec![1.0 / 3.0; 3];
        assert!(tv(&emp, &uniform) < 5.0 * (3.0 / trials as f64).sqrt());
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let ctx = spin_context(0.5, [0.0, 0.0, 1.0]).unwrap();
        let state = SystemState::Mixed(DensityMatrix::maximally_mixed(3).unwrap());
        let mut rng = RandomStream::new(0, 0);
        assert!(matches!(
            measure(&state, &ctx, &mut rng),
            Err(Error::DimensionMismatch(3, 2))
        ));
    }

    #[test]
    fn same_context_chain_repeats_forever() {
        let ctx = context_from_unitary(&haar_random_unitary(5, 8).unwrap(), None).unwrap();
        let state = SystemState::Modal(ctx.projector(2).clone());
        let mut rng = RandomStream::new(1, 0);
        let records =
            run_sequence(&state, &[ctx.clone(), ctx.clone(), ctx.clone()], &mut rng).unwrap();
        assert_eq!(records.len(), 3);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.step, i);
            assert_eq!(r.modality_index, 2);
            assert_eq!(r.probability_assigned, 1.0);
        }
    }

    #[test]
    fn z_x_z_chain_returns_half() {
        let z = spin_context(0.5, [0.0, 0.0, 1.0]).unwrap();
        let x = spin_context(0.5, [1.0, 0.0, 0.0]).unwrap();
        let initial = SystemState::Modal(z.projector(0).clone());
        let mut rng = RandomStream::new(11, 0);
        let trials = 10_000;
        let mut third = Vec::with_capacity(trials);
        for _ in 0..trials {
            let records =
                run_sequence(&initial, &[z.clone(), x.clone(), z.clone()], &mut rng).unwrap();
            assert_eq!(records[0].modality_index, 0); // first step certain
            third.push(records[2].clone());
        }
        let emp = empirical_distribution_sized(&third, 2, 2).unwrap();
        assert!(tv(&emp, &[0.5, 0.5]) < 5.0 * (2.0 / trials as f64).sqrt());
    }

    #[test]
    fn spin_two_chain_matches_exact_chain_distribution() {
        let u = spin_context(2.0, [0.0, 0.0, 1.0]).unwrap();
        let v = spin_context(2.0, [1.0, 0.0, 0.0]).unwrap();
        let start_index = u.index_of_label(1.0, 1e-9).unwrap();
        let initial = SystemState::Modal(u.projector(start_index).clone());

        // Exact chain: sum_m T_uv[i0, m] T_vu[m, k]
        let t_uv = transition_matrix(&u, &v).unwrap();
        let t_vu = transition_matrix(&v, &u).unwrap();
        let exact: Vec<f64> = (0..5)
            .map(|k| (0..5).map(|m| t_uv.entry(start_index, m) * t_vu.entry(m, k)).sum())
            .collect();

        let mut rng = RandomStream::new(123, 0);
        let trials = 20_000;
        let mut third = Vec::with_capacity(trials);
        for _ in 0..trials {
            let records =
                run_sequence(&initial, &[u.clone(), v.clone(), u.clone()], &mut rng).unwrap();
            third.push(records[2].clone());
        }
        let emp = empirical_distribution_sized(&third, 2, 5).unwrap();
        assert!(tv(&emp, &exact) < 5.0 * (5.0 / trials as f64).sqrt());
        let gof = goodness_of_fit(&emp, &exact, trials as u64).unwrap();
        assert!(gof.pass, "chi2 = {}, critical = {}", gof.chi_square, gof.chi_square_critical);
    }

    #[test]
    fn identical_streams_reproduce_records_bitwise() {
        let ctx = context_from_unitary(&haar_random_unitary(3, 20).unwrap(), None).unwrap();
        let other = context_from_unitary(&haar_random_unitary(3, 21).unwrap(), None).unwrap();
        let initial = SystemState::Mixed(DensityMatrix::maximally_mixed(3).unwrap());
        let contexts = vec![ctx.clone(), other, ctx];

        let run = |seed, stream| {
            let mut rng = RandomStream::new(seed, stream);
            let mut all = Vec::new();
            for _ in 0..50 {
                all.extend(run_sequence(&initial, &contexts, &mut rng).unwrap());
            }
            all
        };
        assert_eq!(run(9, 4), run(9, 4));
        assert_ne!(run(9, 4), run(9, 5));
        assert_ne!(run(9, 4), run(10, 4));
    }

    #[test]
    fn random_stream_counter_is_monotone() {
        let mut rng = RandomStream::new(1, 2);
        assert_eq!(rng.counter(), 0);
        rng.next_f64();
        rng.next_f64();
        assert_eq!(rng.counter(), 2);
        assert_eq!(rng.seed(), 1);
        assert_eq!(rng.stream_id(), 2);
    }

    #[test]
    fn empirical_distribution_basics() {
        let rec = |step, idx| MeasurementRecord {
            step,
            context_id: "c".into(),
            modality_index: idx,
            label: idx as f64,
            probability_assigned: 0.5,
        };
        let one_hot: Vec<MeasurementRecord> = (0..40).map(|_| rec(0, 2)).collect();
        assert_eq!(empirical_distribution(&one_hot, 0).unwrap(), vec![0.0, 0.0, 1.0]);

        let mut split = Vec::new();
        for _ in 0..50_000 {
            split.push(rec(0, 0));
            split.push(rec(0, 1));
        }
        assert_eq!(empirical_distribution(&split, 0).unwrap(), vec![0.5, 0.5]);

        assert!(matches!(
            empirical_distribution(&one_hot, 3),
            Err(Error::EmptySelection(_))
        ));
    }

    #[test]
    fn empirical_distribution_sums_to_exactly_one() {
        let rec = |idx| MeasurementRecord {
            step: 0,
            context_id: "c".into(),
            modality_index: idx,
            label: 0.0,
            probability_assigned: 0.5,
        };
        // 1/3 is not dyadic; the residue fold keeps the sum exact.
        let records = vec![rec(0), rec(1), rec(2), rec(0), rec(0), rec(1), rec(2)];
        let freqs = empirical_distribution(&records, 0).unwrap();
        assert_eq!(freqs.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn goodness_of_fit_extremes() {
        let gof = goodness_of_fit(&[0.5, 0.5], &[0.5, 0.5], 100).unwrap();
        assert_eq!(gof.tv_distance, 0.0);
        assert!(gof.pass);

        let fail = goodness_of_fit(&[1.0, 0.0], &[0.0, 1.0], 100).unwrap();
        assert_eq!(fail.tv_distance, 1.0);
        assert!(!fail.pass);

        assert!(matches!(
            goodness_of_fit(&[1.0], &[0.5, 0.5], 10),
            Err(Error::LengthMismatch(1, 2))
        ));
    }

    #[test]
    fn chi_square_critical_matches_quantile_table() {
        // 0.999 quantiles: dof 1 -> 10.828, dof 4 -> 18.467.
        let g1 = goodness_of_fit(&[0.5, 0.5], &[0.5, 0.5], 10).unwrap();
        assert!((g1.chi_square_critical - 10.828).abs() < 0.01);
        let g4 = goodness_of_fit(&[0.2; 5], &[0.2; 5], 10).unwrap();
        assert!((g4.chi_square_critical - 18.467).abs() < 0.01);
    }

    #[test]
    fn record_serialization_roundtrip() {
        let records = vec![
            MeasurementRecord {
                step: 0,
                context_id: "z".into(),
                modality_index: 1,
                label: -0.5,
                probability_assigned: 0.25,
            },
            MeasurementRecord {
                step: 1,
                context_id: "ctx,with,commas".into(),
                modality_index: 0,
                label: 0.5,
                probability_assigned: 1.0,
            },
        ];
        let jsonl = records_to_json_lines(&records);
        let back: Vec<MeasurementRecord> = jsonl
            .lines()
            .map(|line| serde_json::from_str(line).unwrap())
            .collect();
        assert_eq!(records, back);

        let csv = records_to_csv(&records);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "step,context_id,index,label,probability_assigned"
        );
        assert!(lines.next().unwrap().starts_with("0,z,1,-0.5,"));
        assert!(lines.next().unwrap().contains("\"ctx,with,commas\""));
    }
}
