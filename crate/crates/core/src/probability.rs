//! Born-rule probabilities, transition matrices between contexts, frame
//! functions, and the exclusivity structure of modality families.
//!
//! Every probability here is computed exactly from projector traces; the
//! stochastic layer lives in [`crate::measurement`] only.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::contexts::{Context, ExtravalenceClass};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, RankOneProjector};
use crate::reconstruction::unitary_between_contexts;
use crate::tolerances::{
    CERTAIN_THRESHOLD, EXCLUSIVE_THRESHOLD, PROB_CLAMP_WINDOW, TOL_UNITARY,
};

/// Clamp rounding dust off a probability; values farther than
/// [`PROB_CLAMP_WINDOW`] outside [0, 1] indicate a bug, not rounding.
pub(crate) fn clamp_probability(p: f64) -> Result<f64> {
    if (-PROB_CLAMP_WINDOW..0.0).contains(&p) {
        return Ok(0.0);
    }
    if p > 1.0 && p <= 1.0 + PROB_CLAMP_WINDOW {
        return Ok(1.0);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(p)
}

/// Hermitian, unit-trace, positive-semidefinite matrix (within tolerances),
/// checked at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensityMatrix(format!(
                "not square: {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_residual();
        if herm >= TOL_UNITARY {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (residual {herm:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() >= TOL_UNITARY {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {trace} instead of 1"
            )));
        }
        let obs = crate::linalg::HermitianObservable::new(matrix.clone())?;
        let (eigenvalues, _) = crate::linalg::hermitian_eigendecomposition(&obs)?;
        if let Some(&min) = eigenvalues.last() {
            if min < -1e-10 {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(Self { matrix })
    }

    pub fn from_pure(p: &RankOneProjector) -> Self {
        Self { matrix: p.matrix() }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let m = ComplexMatrix::identity(dim)?.scale(Complex64::new(1.0 / dim as f64, 0.0));
        Ok(Self { matrix: m })
    }

    /// Random full-rank density matrix: normalized `G G†` for a complex
    /// Gaussian `G`. Deterministic in `seed`.
    pub fn random(dim: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let normal = StandardNormal;
        let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng))
        })?;
        let gg = g.multiply(&g.dagger())?;
        let trace = gg.trace().re;
        Self::new(gg.scale(Complex64::new(1.0 / trace, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Quadratic form `<v|rho|v>` for a unit vector, i.e. `trace(rho P_v)`.
    pub(crate) fn expectation(&self, v: &[Complex64]) -> f64 {
        crate::linalg::quadratic_form(&self.matrix, v).re
    }
}

/// Probability of the modality with projector `p` in state `rho`:
/// `trace(rho P)`.
pub fn born_probability(rho: &DensityMatrix, p: &RankOneProjector) -> Result<f64> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), p.dim()));
    }
    clamp_probability(rho.expectation(p.vector()))
}

/// Born probability between two pure states: `trace(Q P) = |<q|p>|^2`.
pub fn pure_born_probability(q: &RankOneProjector, p: &RankOneProjector) -> Result<f64> {
    clamp_probability(q.overlap(p)?)
}

/// Doubly stochastic matrix of transition probabilities between two
/// contexts; entry (i, j) is the probability of modality j in the final
/// context given modality i in the initial one.
///
/// Construction certifies unistochasticity: the entries must equal the
/// squared moduli of the connecting unitary expressed across the two
/// projector families.
#[derive(Debug, Clone)]
pub struct TransitionMatrix {
    dim: usize,
    entries: Vec<f64>,
    source: Context,
    target: Context,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn source(&self) -> &Context {
        &self.source
    }

    pub fn target(&self) -> &Context {
        &self.target
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.row(i).iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> f64 {
        (0..self.dim).map(|i| self.entry(i, j)).sum()
    }

    /// CSV rendering: header row of target labels, then N rows of entries.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.target.labels().iter().map(|l| l.to_string()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TransitionMatrixJson {
    source_labels: Vec<f64>,
    target_labels: Vec<f64>,
    entries: Vec<Vec<f64>>,
}

impl Serialize for TransitionMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TransitionMatrixJson {
            source_labels: self.source.labels().to_vec(),
            target_labels: self.target.labels().to_vec(),
            entries: (0..self.dim).map(|i| self.row(i).to_vec()).collect(),
        }
        .serialize(serializer)
    }
}

/// Transition probabilities `trace(P_i Q_j)` between two equal-dimension
/// contexts, with the unistochasticity certificate.
pub fn transition_matrix(initial: &Context, final_ctx: &Context) -> Result<TransitionMatrix> {
    let n = initial.dim();
    if n != final_ctx.dim() {
        return Err(Error::DimensionMismatch(n, final_ctx.dim()));
    }
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] =
                clamp_probability(initial.projector(i).overlap(final_ctx.projector(j))?)?;
        }
    }

    // Independent route: the connecting unitary U = sum_k |b_k><a_k| must
    // reproduce every entry as |<a_i|U|a_j>|^2.
    let u = unitary_between_contexts(initial, final_ctx)?;
    for j in 0..n {
        let image = u.apply(initial.projector(j).vector())?;
        for i in 0..n {
            let amp = crate::linalg::inner_product(initial.projector(i).vector(), &image);
            let dev = (amp.norm_sqr() - entries[i * n + j]).abs();
            if dev >= 1e-10 {
                return Err(Error::Certification(format!(
                    "transition entry ({i}, {j}) deviates from the connecting unitary by {dev:.3e}"
                )));
            }
        }
    }

    for i in 0..n {
        let rs: f64 = entries[i * n..(i + 1) * n].iter().sum();
        let cs: f64 = (0..n).map(|k| entries[k * n + i]).sum();
        if (rs - 1.0).abs() >= 1e-10 || (cs - 1.0).abs() >= 1e-10 {
            return Err(Error::Certification(format!(
                "row/column {i} sums ({rs}, {cs}) are not doubly stochastic"
            )));
        }
    }

    Ok(TransitionMatrix {
        dim: n,
        entries,
        source: initial.clone(),
        target: final_ctx.clone(),
    })
}

/// Born distribution of one extravalence class over each of the given
/// contexts. The class alone fixes no single sample space: each context
/// induces its own distribution, and they generally differ.
pub fn distributions_for_state(
    psi: &ExtravalenceClass,
    contexts: &[Context],
) -> Result<Vec<Vec<f64>>> {
    contexts
        .iter()
        .map(|ctx| {
            if ctx.dim() != psi.dim() {
                return Err(Error::DimensionMismatch(ctx.dim(), psi.dim()));
            }
            ctx.projectors()
                .iter()
                .map(|p| pure_born_probability(psi.representative(), p))
                .collect()
        })
        .collect()
}

/// Probability assignment over rank-one projectors that sums to 1 on every
/// complete context.
pub struct FrameFunction {
    dim: usize,
    evaluator: Box<dyn Fn(&RankOneProjector) -> f64 + Send + Sync>,
}

impl FrameFunction {
    pub fn new(
        dim: usize,
        evaluator: impl Fn(&RankOneProjector) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            evaluator: Box::new(evaluator),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn evaluate(&self, p: &RankOneProjector) -> Result<f64> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch(p.dim(), self.dim));
        }
        clamp_probability((self.evaluator)(p))
    }

    pub fn sum_over_context(&self, ctx: &Context) -> Result<f64> {
        ctx.projectors()
            .iter()
            .map(|p| self.evaluate(p))
            .sum::<Result<f64>>()
    }
}

/// Born-form frame function `P -> trace(rho P)`.
pub fn frame_function_from_density(rho: &DensityMatrix) -> FrameFunction {
    let rho = rho.clone();
    FrameFunction::new(rho.dim(), move |p| rho.expectation(p.vector()))
}

/// A modality referenced by (context position, outcome index) inside a
/// corpus of contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModalityRef {
    pub context: usize,
    pub index: usize,
}

/// Outcome of the super-context check on a corpus of same-dimension
/// contexts.
#[derive(Debug, Clone, Serialize)]
pub struct SuperContextReport {
    pub dim: usize,
    pub num_contexts: usize,
    /// Cross-context pairs with transition probability below the exclusivity
    /// threshold.
    pub exclusive_pairs: Vec<(ModalityRef, ModalityRef)>,
    /// Cross-context pairs with transition probability above the certainty
    /// threshold (extravalent links).
    pub certain_pairs: Vec<(ModalityRef, ModalityRef)>,
    /// Number of cross-context pairs strictly between the two thresholds.
    pub probabilistic_pairs: usize,
    /// Size of the largest set of pairwise mutually exclusive modalities,
    /// same-context pairs included.
    pub max_exclusive_set_size: usize,
    pub pass: bool,
}

impl SuperContextReport {
    pub fn metrics(&self) -> BTreeMap<String, f64> {
        BTreeMap::from([
            ("dim".into(), self.dim as f64),
            ("num_contexts".into(), self.num_contexts as f64),
            ("exclusive_pairs".into(), self.exclusive_pairs.len() as f64),
            ("certain_pairs".into(), self.certain_pairs.len() as f64),
            ("probabilistic_pairs".into(), self.probabilistic_pairs as f64),
            (
                "max_exclusive_set_size".into(),
                self.max_exclusive_set_size as f64,
            ),
        ])
    }
}

/// Classify every cross-context modality pair as mutually exclusive,
/// certain, or probabilistic, and verify that no more than N modalities are
/// pairwise exclusive (no super context).
pub fn check_no_super_context(contexts: &[Context]) -> Result<SuperContextReport> {
    if contexts.is_empty() {
        return Err(Error::InvalidParameter("empty context list".into()));
    }
    let dim = contexts[0].dim();
    for c in contexts {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch(c.dim(), dim));
        }
    }

    let vertices: Vec<ModalityRef> = contexts
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| (0..c.dim()).map(move |ii| ModalityRef { context: ci, index: ii }))
        .collect();
    let v = vertices.len();
    let mut adjacent = vec![vec![false; v]; v];
    let mut exclusive_pairs = Vec::new();
    let mut certain_pairs = Vec::new();
    let mut probabilistic_pairs = 0usize;

    for a in 0..v {
        for b in (a + 1)..v {
            let (ra, rb) = (vertices[a], vertices[b]);
            if ra.context == rb.context {
                // Distinct modalities of one context are exclusive by
                // orthogonality of the family.
                adjacent[a][b] = true;
                adjacent[b][a] = true;
                continue;
            }
            let p = pure_born_probability(
                contexts[ra.context].projector(ra.index),
                contexts[rb.context].projector(rb.index),
            )?;
            if p < EXCLUSIVE_THRESHOLD {
                adjacent[a][b] = true;
                adjacent[b][a] = true;
                exclusive_pairs.push((ra, rb));
            } else if p > CERTAIN_THRESHOLD {
                certain_pairs.push((ra, rb));
            } else {
                probabilistic_pairs += 1;
            }
        }
    }

    let max_exclusive_set_size = max_clique(&adjacent);
    Ok(SuperContextReport {
        dim,
        num_contexts: contexts.len(),
        exclusive_pairs,
        certain_pairs,
        probabilistic_pairs,
        max_exclusive_set_size,
        pass: max_exclusive_set_size <= dim,
    })
}

/// Largest clique in a small undirected graph, by branch and bound.
fn max_clique(adjacent: &[Vec<bool>]) -> usize {
    fn extend(adjacent: &[Vec<bool>], size: usize, mut candidates: Vec<usize>, best: &mut usize) {
        if candidates.is_empty() {
            *best = (*best).max(size);
            return;
        }
        while let Some(v) = candidates.pop() {
            if size + 1 + candidates.len() <= *best {
                return;
            }
            let next: Vec<usize> = candidates
                .iter()
                .copied()
                .filter(|&u| adjacent[v][u])
                .collect();
            extend(adjacent, size + 1, next, best);
        }
    }
    let mut best = 0;
    extend(adjacent, 0, (0..adjacent.len()).collect(), &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contexts::{context_from_unitary, spin_context};
    use crate::linalg::{haar_random_unitary, UnitaryMatrix};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z_context() -> Context {
        spin_context(0.5, [0.0, 0.0, 1.0]).unwrap()
    }

    fn x_context() -> Context {
        spin_context(0.5, [1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn born_probability_on_own_projector_is_one() {
        let p = RankOneProjector::from_vector(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let rho = DensityMatrix::from_pure(&p);
        assert_relative_eq!(born_probability(&rho, &p).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn born_probability_maximally_mixed() {
        for n in (2..=6).step_by(2) {
            let rho = DensityMatrix::maximally_mixed(n).unwrap();
            let p = RankOneProjector::standard_basis(n, 0).unwrap();
            assert_relative_eq!(
                born_probability(&rho, &p).unwrap(),
                1.0 / n as f64,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn born_probability_mutually_unbiased_qubit() {
        let z_plus = z_context().projector(0).clone();
        let x_plus = x_context().projector(0).clone();
        let rho = DensityMatrix::from_pure(&z_plus);
        assert_relative_eq!(born_probability(&rho, &x_plus).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn pure_born_probability_basics() {
        let q = RankOneProjector::standard_basis(3, 0).unwrap();
        let p = RankOneProjector::standard_basis(3, 1).unwrap();
        assert_eq!(pure_born_probability(&q, &q).unwrap(), 1.0);
        assert_eq!(pure_born_probability(&q, &p).unwrap(), 0.0);
    }

    #[test]
    fn pure_born_probability_bloch_angle() {
        // Two qubit states separated by Bloch angle theta overlap at
        // cos^2(theta/2); the 2-dim inner product oracle gives the same.
        for theta in [0.4, std::f64::consts::FRAC_PI_2, 2.2] {
            let a = crate::contexts::bloch_projector([0.0, 0.0, 1.0]).unwrap();
            let b = crate::contexts::bloch_projector([theta.sin(), 0.0, theta.cos()]).unwrap();
            let overlap = pure_born_probability(&a, &b).unwrap();
            assert_relative_eq!(overlap, (theta / 2.0).cos().powi(2), epsilon = 1e-12);
        }
    }

    #[test]
    fn pure_born_probability_is_symmetric() {
        let u = haar_random_unitary(4, 17).unwrap();
        let ctx = context_from_unitary(&u, None).unwrap();
        let other = context_from_unitary(&haar_random_unitary(4, 18).unwrap(), None).unwrap();
        for p in ctx.projectors() {
            for q in other.projectors() {
                let pq = pure_born_probability(p, q).unwrap();
                let qp = pure_born_probability(q, p).unwrap();
                assert!((pq - qp).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn clamp_window_behaves() {
        assert_eq!(clamp_probability(-5e-13).unwrap(), 0.0);
        assert_eq!(clamp_probability(1.0 + 5e-13).unwrap(), 1.0);
        assert!(clamp_probability(-1e-9).is_err());
        assert!(clamp_probability(1.0 + 1e-9).is_err());
    }

    #[test]
    fn transition_matrix_same_context_is_identity() {
        let ctx = context_from_unitary(&haar_random_unitary(4, 3).unwrap(), None).unwrap();
        let t = transition_matrix(&ctx, &ctx).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(t.entry(i, j), want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn transition_matrix_mutually_unbiased_qubit() {
        let t = transition_matrix(&z_context(), &x_context()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(t.entry(i, j), 0.5, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn transition_matrix_spin_one_matches_rotation_oracle() {
        // Oracle: rotation matrix elements for spin 1 about the y axis give
        // transition probabilities
        //   [[(1+c)^2/4, s^2/2, (1-c)^2/4],
        //    [s^2/2,     c^2,   s^2/2],
        //    [(1-c)^2/4, s^2/2, (1+c)^2/4]]
        for beta in [std::f64::consts::FRAC_PI_2, 0.7] {
            let (s, cth) = (beta.sin(), beta.cos());
            let oracle = [
                [(1.0 + cth).powi(2) / 4.0, s * s / 2.0, (1.0 - cth).powi(2) / 4.0],
                [s * s / 2.0, cth * cth, s * s / 2.0],
                [(1.0 - cth).powi(2) / 4.0, s * s / 2.0, (1.0 + cth).powi(2) / 4.0],
            ];
            let cz = spin_context(1.0, [0.0, 0.0, 1.0]).unwrap();
            let cv = spin_context(1.0, [beta.sin(), 0.0, beta.cos()]).unwrap();
            let t = transition_matrix(&cz, &cv).unwrap();
            for (i, row) in oracle.iter().enumerate() {
                for (j, want) in row.iter().enumerate() {
                    assert_relative_eq!(t.entry(i, j), *want, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn transition_matrix_rejects_dimension_mismatch() {
        let a = context_from_unitary(&haar_random_unitary(2, 1).unwrap(), None).unwrap();
        let b = context_from_unitary(&haar_random_unitary(3, 1).unwrap(), None).unwrap();
        assert!(matches!(
            transition_matrix(&a, &b),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn transition_matrix_doubly_stochastic_over_random_pairs() {
        for dim in 2..=8 {
            for sample in 0..25 {
                let seed = (dim * 1000 + sample) as u64;
                let a = context_from_unitary(&haar_random_unitary(dim, seed).unwrap(), None)
                    .unwrap();
                let b =
                    context_from_unitary(&haar_random_unitary(dim, seed + 500).unwrap(), None)
                        .unwrap();
                let t = transition_matrix(&a, &b).unwrap();
                for i in 0..dim {
                    assert!((t.row_sum(i) - 1.0).abs() < 1e-10);
                    assert!((t.col_sum(i) - 1.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn transition_matrix_csv_and_json_render() {
        let t = transition_matrix(&z_context(), &x_context()).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "0.5,-0.5"); // target labels
        assert_eq!(lines.count(), 2);

        let json: serde_json::Value = serde_json::to_value(&t).unwrap();
        assert_eq!(json["source_labels"], serde_json::json!([0.5, -0.5]));
        assert_eq!(json["target_labels"], serde_json::json!([0.5, -0.5]));
        assert_eq!(json["entries"].as_array().unwrap().len(), 2);
        let entry = json["entries"][0][0].as_f64().unwrap();
        assert!((entry - 0.5).abs() < 1e-12);
    }

    #[test]
    fn distributions_for_state_basics() {
        let zc = z_context();
        let xc = x_context();
        let psi = crate::contexts::extravalence_class_of(&zc.modality(0).unwrap());
        let dists = distributions_for_state(&psi, &[zc.clone(), xc]).unwrap();
        assert_relative_eq!(dists[0][0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(dists[0][1], 0.0, epsilon = 1e-12);
        assert_relative_eq!(dists[1][0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(dists[1][1], 0.5, epsilon = 1e-12);
        for d in &dists {
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn distributions_differ_across_generic_contexts() {
        let ctx = context_from_unitary(&haar_random_unitary(3, 5).unwrap(), None).unwrap();
        let other = context_from_unitary(&haar_random_unitary(3, 6).unwrap(), None).unwrap();
        let psi = crate::contexts::extravalence_class_of(&ctx.modality(0).unwrap());
        let dists = distributions_for_state(&psi, &[ctx, other]).unwrap();
        let tv: f64 = dists[0]
            .iter()
            .zip(&dists[1])
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv > 1e-3, "state alone fixed the distribution (tv = {tv})");
    }

    #[test]
    fn frame_function_from_density_properties() {
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        let f = frame_function_from_density(&rho);
        let p = RankOneProjector::standard_basis(3, 1).unwrap();
        assert_relative_eq!(f.evaluate(&p).unwrap(), 1.0 / 3.0, epsilon = 1e-12);

        let random_rho = DensityMatrix::random(3, 77).unwrap();
        let g = frame_function_from_density(&random_rho);
        for seed in 0..10 {
            let ctx = context_from_unitary(&haar_random_unitary(3, seed).unwrap(), None).unwrap();
            assert!((g.sum_over_context(&ctx).unwrap() - 1.0).abs() < 1e-10);
            for p in ctx.projectors() {
                let direct = born_probability(&random_rho, p).unwrap();
                assert_relative_eq!(g.evaluate(p).unwrap(), direct, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn frame_function_depends_on_projector_only() {
        let rho = DensityMatrix::random(2, 9).unwrap();
        let f = frame_function_from_density(&rho);
        let v = [c(0.3, 0.4), c(-0.5, 0.2)];
        let p = RankOneProjector::from_vector(&v).unwrap();
        // Same ray with a different global phase and scale.
        let w: Vec<Complex64> = v.iter().map(|z| z * c(-1.3, 2.1)).collect();
        let q = RankOneProjector::from_vector(&w).unwrap();
        assert!((f.evaluate(&p).unwrap() - f.evaluate(&q).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn super_context_single_context() {
        let ctx = context_from_unitary(&haar_random_unitary(4, 2).unwrap(), None).unwrap();
        let report = check_no_super_context(&[ctx]).unwrap();
        assert_eq!(report.max_exclusive_set_size, 4);
        assert!(report.exclusive_pairs.is_empty());
        assert!(report.pass);
    }

    #[test]
    fn super_context_mutually_unbiased_pair() {
        let report = check_no_super_context(&[z_context(), x_context()]).unwrap();
        assert!(report.exclusive_pairs.is_empty());
        assert_eq!(report.max_exclusive_set_size, 2);
        assert!(report.pass);
    }

    #[test]
    fn super_context_shared_axis_has_cross_exclusives() {
        let alpha = 0.9_f64;
        let standard = context_from_unitary(&UnitaryMatrix::identity(3).unwrap(), None).unwrap();
        let rotated = context_from_unitary(
            &UnitaryMatrix::new(
                ComplexMatrix::new(
                    3,
                    3,
                    vec![
                        c(1.0, 0.0),
                        c(0.0, 0.0),
                        c(0.0, 0.0),
                        c(0.0, 0.0),
                        c(alpha.cos(), 0.0),
                        c(-alpha.sin(), 0.0),
                        c(0.0, 0.0),
                        c(alpha.sin(), 0.0),
                        c(alpha.cos(), 0.0),
                    ],
                )
                .unwrap(),
            )
            .unwrap(),
            None,
        )
        .unwrap();
        let report = check_no_super_context(&[standard, rotated]).unwrap();
        assert!(!report.exclusive_pairs.is_empty());
        assert!(!report.certain_pairs.is_empty()); // the shared e1 link
        assert_eq!(report.max_exclusive_set_size, 3);
        assert!(report.pass);
    }
}
