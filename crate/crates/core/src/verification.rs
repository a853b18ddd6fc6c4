//! Property suites: randomized checks of the unistochastic structure,
//! Gleason recovery and its qubit failure, permutation connectivity,
//! extravalence as an equivalence relation, and the absence of super
//! contexts. Each suite returns one [`CheckReport`] per dimension.

use std::collections::BTreeMap;

use crate::contexts::{context_from_unitary, extravalence_class_of, extravalent, Context};
use crate::error::{Error, Result};
use crate::linalg::{
    haar_random_unitary_from, inner_product, Complex64, ComplexMatrix, UnitaryMatrix,
};
use crate::measurement::RandomStream;
use crate::probability::{
    born_probability, check_no_super_context, pure_born_probability, transition_matrix,
    DensityMatrix,
};
use crate::reconstruction::{
    counterexample_report, gleason_fit, permutation_path, permutation_sign, unitary_between_contexts,
    CheckReport, QubitFrameCounterexample,
};
use crate::tolerances::CERTAIN_THRESHOLD;

fn random_context(dim: usize, rng: &mut RandomStream) -> Result<Context> {
    context_from_unitary(&haar_random_unitary_from(dim, rng)?, None)
}

/// New context sharing projector 0 with `base`, the rest rotated by a Haar
/// unitary on the orthogonal complement.
fn shared_projector_context(base: &Context, rng: &mut RandomStream) -> Result<Context> {
    let n = base.dim();
    let a_cols = ComplexMatrix::from_fn(n, n, |i, k| base.projector(k).vector()[i])?;
    let q = haar_random_unitary_from(n - 1, rng)?;
    let mut block = ComplexMatrix::zeros(n, n)?;
    block.set(0, 0, Complex64::new(1.0, 0.0));
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            block.set(i + 1, j + 1, q.matrix().get(i, j));
        }
    }
    context_from_unitary(&UnitaryMatrix::new(a_cols.multiply(&block)?)?, None)
}

/// Transition matrices of Haar-random context pairs are doubly stochastic
/// and match the squared moduli of the connecting unitary.
pub fn verify_unistochastic(dims: &[usize], samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for (d, &dim) in dims.iter().enumerate() {
        let mut rng = RandomStream::new(seed, d as u64);
        let mut max_row_dev = 0.0_f64;
        let mut max_col_dev = 0.0_f64;
        let mut max_entry_dev = 0.0_f64;
        for _ in 0..samples {
            let a = random_context(dim, &mut rng)?;
            let b = random_context(dim, &mut rng)?;
            let t = transition_matrix(&a, &b)?;
            for i in 0..dim {
                max_row_dev = max_row_dev.max((t.row_sum(i) - 1.0).abs());
                max_col_dev = max_col_dev.max((t.col_sum(i) - 1.0).abs());
            }
            let u = unitary_between_contexts(&a, &b)?;
            for j in 0..dim {
                let image = u.apply(a.projector(j).vector())?;
                for i in 0..dim {
                    let amp = inner_product(a.projector(i).vector(), &image).norm_sqr();
                    max_entry_dev = max_entry_dev.max((amp - t.entry(i, j)).abs());
                }
            }
        }
        let pass = max_row_dev < 1e-10 && max_col_dev < 1e-10 && max_entry_dev < 1e-10;
        reports.push(CheckReport::new(
            format!("unistochastic_dim{dim}"),
            pass,
            BTreeMap::from([
                ("dim".into(), dim as f64),
                ("samples".into(), samples as f64),
                ("max_row_sum_dev".into(), max_row_dev),
                ("max_col_sum_dev".into(), max_col_dev),
                ("max_unistochastic_dev".into(), max_entry_dev),
            ]),
        ));
    }
    Ok(reports)
}

/// Exact Born probabilities of a random density matrix over random
/// contexts determine the density matrix by least squares.
pub fn verify_gleason(dims: &[usize], contexts_per_fit: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for (d, &dim) in dims.iter().enumerate() {
        if dim < 3 {
            return Err(Error::InvalidParameter(format!(
                "gleason recovery needs dimension >= 3, got {dim}"
            )));
        }
        let mut rng = RandomStream::new(seed, d as u64);
        let rho = DensityMatrix::random(dim, seed.wrapping_add(dim as u64))?;
        let mut samples = Vec::with_capacity(contexts_per_fit * dim);
        for _ in 0..contexts_per_fit {
            let ctx = random_context(dim, &mut rng)?;
            for p in ctx.projectors() {
                samples.push((p.clone(), born_probability(&rho, p)?));
            }
        }
        let fit = gleason_fit(&samples, dim)?;
        let frobenius_error = fit.rho_hat.matrix().frobenius_distance(rho.matrix())?;
        let pass =
            frobenius_error < 1e-8 && fit.residual < 1e-10 && fit.psd_violation < 1e-9;
        reports.push(CheckReport::new(
            format!("gleason_recovery_dim{dim}"),
            pass,
            BTreeMap::from([
                ("dim".into(), dim as f64),
                ("contexts".into(), contexts_per_fit as f64),
                ("samples".into(), samples.len() as f64),
                ("frobenius_error".into(), frobenius_error),
                ("residual".into(), fit.residual),
                ("psd_violation".into(), fit.psd_violation),
            ]),
        ));
    }
    Ok(reports)
}

/// The qubit counterexample: antipodally complete but not of Born form.
pub fn verify_counterexample(num_contexts: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let c = QubitFrameCounterexample::default();
    Ok(vec![counterexample_report(&c, num_contexts, seed)?])
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(current: &mut Vec<usize>, remaining: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining.is_empty() {
            out.push(current.clone());
            return;
        }
        for i in 0..remaining.len() {
            let x = remaining.remove(i);
            current.push(x);
            go(current, remaining, out);
            current.pop();
            remaining.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Every permutation of each dimension is continuously connected to the
/// identity through unitaries (101 grid points), while every transposition
/// has determinant exactly -1 and therefore no real orthogonal path.
pub fn verify_permutation(dims: &[usize], grid_points: usize) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for &dim in dims {
        if dim > 6 {
            return Err(Error::InvalidParameter(format!(
                "permutation sweep is capped at dimension 6, got {dim}"
            )));
        }
        let perms = all_permutations(dim);
        let mut max_unitarity = 0.0_f64;
        let mut max_endpoint = 0.0_f64;
        let mut transpositions = 0usize;
        let mut det_ok = true;
        for perm in &perms {
            let sign = permutation_sign(perm)?;
            let moved = perm.iter().enumerate().filter(|(i, &p)| *i != p).count();
            if moved == 2 {
                transpositions += 1;
                det_ok &= sign == -1;
            }
            for k in 0..grid_points {
                let t = k as f64 / (grid_points - 1) as f64;
                let point = permutation_path(perm, t)?;
                max_unitarity = max_unitarity.max(point.matrix().unitarity_residual());
                if k == 0 {
                    max_endpoint = max_endpoint.max(
                        point
                            .matrix()
                            .frobenius_distance(&ComplexMatrix::identity(dim)?)?,
                    );
                }
                if k == grid_points - 1 {
                    let target = crate::reconstruction::permutation_matrix(perm)?;
                    max_endpoint =
                        max_endpoint.max(point.matrix().frobenius_distance(target.matrix())?);
                }
            }
        }
        let pass = det_ok && max_unitarity < 1e-10 && max_endpoint < 1e-10;
        reports.push(CheckReport::new(
            format!("permutation_connectivity_dim{dim}"),
            pass,
            BTreeMap::from([
                ("dim".into(), dim as f64),
                ("permutations".into(), perms.len() as f64),
                ("grid_points".into(), grid_points as f64),
                ("transpositions".into(), transpositions as f64),
                ("transposition_det_ok".into(), if det_ok { 1.0 } else { 0.0 }),
                ("max_unitarity_residual".into(), max_unitarity),
                ("max_endpoint_error".into(), max_endpoint),
            ]),
        ));
    }
    Ok(reports)
}

/// Extravalence is an equivalence relation on sampled modality families and
/// coincides with transition probability 1.
pub fn verify_extravalence(dims: &[usize], samples: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for (d, &dim) in dims.iter().enumerate() {
        if dim < 2 {
            return Err(Error::InvalidParameter("extravalence needs dim >= 2".into()));
        }
        let mut rng = RandomStream::new(seed, d as u64);
        let mut violations = 0usize;
        let mut checked = 0usize;
        for _ in 0..samples {
            let c0 = random_context(dim, &mut rng)?;
            let c1 = shared_projector_context(&c0, &mut rng)?;
            let c2 = shared_projector_context(&c0, &mut rng)?;
            let family = [&c0, &c1, &c2];
            let modalities: Vec<_> = family.iter().flat_map(|c| c.modalities()).collect();
            for a in &modalities {
                // reflexivity
                checked += 1;
                if !extravalent(a, a)? {
                    violations += 1;
                }
                for b in &modalities {
                    let ab = extravalent(a, b)?;
                    // symmetry
                    checked += 1;
                    if ab != extravalent(b, a)? {
                        violations += 1;
                    }
                    // agreement with certain transition probability
                    checked += 1;
                    let prob = pure_born_probability(a.projector(), b.projector())?;
                    if ab != (prob > CERTAIN_THRESHOLD) {
                        violations += 1;
                    }
                    // class representatives agree exactly when extravalent
                    checked += 1;
                    let same =
                        extravalence_class_of(a).same_class(&extravalence_class_of(b))?;
                    if ab != same {
                        violations += 1;
                    }
                    // transitivity
                    for c in &modalities {
                        if ab && extravalent(b, c)? {
                            checked += 1;
                            if !extravalent(a, c)? {
                                violations += 1;
                            }
                        }
                    }
                }
            }
        }
        reports.push(CheckReport::new(
            format!("extravalence_relation_dim{dim}"),
            violations == 0,
            BTreeMap::from([
                ("dim".into(), dim as f64),
                ("samples".into(), samples as f64),
                ("checks".into(), checked as f64),
                ("violations".into(), violations as f64),
            ]),
        ));
    }
    Ok(reports)
}

/// No corpus of random contexts contains more than N pairwise mutually
/// exclusive modalities.
pub fn verify_super_context(dims: &[usize], corpora: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for (d, &dim) in dims.iter().enumerate() {
        let mut rng = RandomStream::new(seed, d as u64);
        let mut max_set = 0usize;
        let mut all_pass = true;
        for _ in 0..corpora {
            let base = random_context(dim, &mut rng)?;
            let corpus = if dim >= 2 {
                vec![
                    base.clone(),
                    shared_projector_context(&base, &mut rng)?,
                    random_context(dim, &mut rng)?,
                    random_context(dim, &mut rng)?,
                ]
            } else {
                vec![base.clone()]
            };
            let report = check_no_super_context(&corpus)?;
            max_set = max_set.max(report.max_exclusive_set_size);
            all_pass &= report.pass;
        }
        reports.push(CheckReport::new(
            format!("no_super_context_dim{dim}"),
            all_pass && max_set <= dim,
            BTreeMap::from([
                ("dim".into(), dim as f64),
                ("corpora".into(), corpora as f64),
                ("max_exclusive_set_size".into(), max_set as f64),
            ]),
        ));
    }
    Ok(reports)
}
