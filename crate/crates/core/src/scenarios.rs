//! Pre-built physical demonstrations: sequential spin measurements in two
//! directions, a balanced Mach-Zehnder interferometer with an optional
//! which-path measurement inside, and the two-qubit singlet measured either
//! jointly (certain outcome) or by separated analyzers (perfectly random
//! marginals, correlated outcomes). CHSH is included as the standard
//! quantitative witness of those correlations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::contexts::{context_from_unitary, spin_context, Context, ExtravalenceClass};
use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, RankOneProjector, UnitaryMatrix};
use crate::measurement::{
    empirical_distribution_sized, goodness_of_fit, measure, run_sequence, RandomStream,
    SystemState,
};
use crate::probability::{pure_born_probability, transition_matrix};

/// Request for a named scenario: parameters plus trial count and seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub parameters: BTreeMap<String, ParamValue>,
    pub trials: u64,
    pub seed: u64,
}

/// Scenario parameter: number, direction triple, flag, or text (e.g. a
/// spin written as "3/2").
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Number(f64),
    Vector(Vec<f64>),
    Text(String),
}

/// Distribution over named outcomes, for reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabeledDistribution {
    pub name: String,
    pub labels: Vec<String>,
    pub probabilities: Vec<f64>,
}

/// Scenario outcome: exact and empirical distributions, derived metrics,
/// and the overall pass flag.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    #[serde(rename = "exact")]
    pub exact_distributions: Vec<LabeledDistribution>,
    #[serde(rename = "empirical")]
    pub empirical_distributions: Vec<LabeledDistribution>,
    #[serde(rename = "metrics")]
    pub derived_metrics: BTreeMap<String, f64>,
    pub pass: bool,
}

impl ScenarioReport {
    pub fn metric(&self, key: &str) -> Option<f64> {
        self.derived_metrics.get(key).copied()
    }
}

/// Parse a spin value written as a rational ("1/2", "3/2") or a decimal
/// ("0.5", "2").
pub fn parse_half_integer(text: &str) -> Result<f64> {
    let bad = || Error::InvalidParameter(format!("cannot parse spin '{text}'"));
    if let Some((num, den)) = text.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|_| bad())?;
        let den: f64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0.0 {
            return Err(bad());
        }
        Ok(num / den)
    } else {
        text.trim().parse().map_err(|_| bad())
    }
}

fn normalize3(v: [f64; 3]) -> Result<[f64; 3]> {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    Ok([v[0] / norm, v[1] / norm, v[2] / norm])
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn tv(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0
}

fn distribution(name: &str, labels: &[String], probabilities: Vec<f64>) -> LabeledDistribution {
    LabeledDistribution {
        name: name.to_string(),
        labels: labels.to_vec(),
        probabilities,
    }
}

/// Three measurements u, v, u on one system prepared in the modality
/// `initial_label` along u. The first step is certain; the third is random
/// whenever v differs from u, with the exact chain distribution obtained by
/// multiplying transition-matrix rows.
pub fn scenario_sequential_spin(
    j: f64,
    u: [f64; 3],
    v: [f64; 3],
    initial_label: f64,
    trials: u64,
    seed: u64,
) -> Result<ScenarioReport> {
    let cu = spin_context(j, u)?.with_name("u");
    let cv = spin_context(j, v)?.with_name("v");
    let dim = cu.dim();
    let start = cu.index_of_label(initial_label, 1e-9).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "label {initial_label} is not an outcome of spin {j} (labels {:?})",
            cu.labels()
        ))
    })?;
    let initial = SystemState::Modal(cu.projector(start).clone());

    let t_uv = transition_matrix(&cu, &cv)?;
    let t_vu = transition_matrix(&cv, &cu)?;
    let mut first_exact = vec![0.0; dim];
    first_exact[start] = 1.0;
    let second_exact = t_uv.row(start).to_vec();
    let third_exact: Vec<f64> = (0..dim)
        .map(|k| (0..dim).map(|m| t_uv.entry(start, m) * t_vu.entry(m, k)).sum())
        .collect();

    let mut rng = RandomStream::new(seed, 0);
    let contexts = [cu.clone(), cv.clone(), cu.clone()];
    let mut records = Vec::with_capacity(3 * trials as usize);
    for _ in 0..trials {
        records.extend(run_sequence(&initial, &contexts, &mut rng)?);
    }
    let first_emp = empirical_distribution_sized(&records, 0, dim)?;
    let second_emp = empirical_distribution_sized(&records, 1, dim)?;
    let third_emp = empirical_distribution_sized(&records, 2, dim)?;

    let first_step_certain = first_emp[start] == 1.0;
    let gof = goodness_of_fit(&third_emp, &third_exact, trials)?;

    let u_labels: Vec<String> = cu.labels().iter().map(|l| l.to_string()).collect();
    let v_labels: Vec<String> = cv.labels().iter().map(|l| l.to_string()).collect();
    let mut metrics = BTreeMap::from([
        ("spin".into(), j),
        ("trials".into(), trials as f64),
        ("initial_label".into(), initial_label),
        (
            "first_step_certain".into(),
            if first_step_certain { 1.0 } else { 0.0 },
        ),
        ("third_step_tv".into(), tv(&third_emp, &third_exact)),
        ("third_step_chi_square".into(), gof.chi_square),
        ("chi_square_critical".into(), gof.chi_square_critical),
    ]);
    metrics.insert("u_dot_v".into(), dot3(normalize3(u)?, normalize3(v)?));

    Ok(ScenarioReport {
        exact_distributions: vec![
            distribution("step0_u", &u_labels, first_exact),
            distribution("step1_v", &v_labels, second_exact),
            distribution("step2_u", &u_labels, third_exact),
        ],
        empirical_distributions: vec![
            distribution("step0_u", &u_labels, first_emp),
            distribution("step1_v", &v_labels, second_emp),
            distribution("step2_u", &u_labels, third_emp),
        ],
        derived_metrics: metrics,
        pass: first_step_certain && gof.pass,
    })
}

/// Balanced Mach-Zehnder interferometer, dimension 2.
///
/// Both splitters are symmetric 50/50 (phase i on reflection); `phase` is
/// applied on arm 0 between them. All contexts are expressed at the input
/// plane: the inside path context is the image of the arm basis under the
/// first splitter, the output context the image of the port basis under the
/// whole interferometer. Port A is the constructive-interference port at
/// zero phase. With `measure_inside`, a which-path measurement between the
/// splitters collapses the superposition and the output becomes random.
pub fn scenario_mach_zehnder(
    phase: f64,
    measure_inside: bool,
    trials: u64,
    seed: u64,
) -> Result<ScenarioReport> {
    let s = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let is = Complex64::new(0.0, 1.0 / 2.0_f64.sqrt());
    let splitter = ComplexMatrix::new(2, 2, vec![s, is, is, s])?;
    let phase_shift = ComplexMatrix::from_diagonal(&[
        Complex64::from_polar(1.0, phase),
        Complex64::new(1.0, 0.0),
    ])?;
    let full = splitter.multiply(&phase_shift)?.multiply(&splitter)?;
    let full = UnitaryMatrix::new(full)?;

    let inside_ctx = context_from_unitary(
        &UnitaryMatrix::new(splitter.dagger())?,
        Some(vec![0.0, 1.0]),
    )?
    .with_name("inside_paths");
    // Port A is output mode 1, where phase 0 interferes constructively.
    let port_a = RankOneProjector::from_vector(&full.matrix().dagger().column(1))?;
    let port_b = RankOneProjector::from_vector(&full.matrix().dagger().column(0))?;
    let output_ctx = Context::new(vec![port_a, port_b], vec![0.0, 1.0])?.with_name("output_ports");

    let entry_state = SystemState::Modal(RankOneProjector::standard_basis(2, 0)?);
    let port_labels = vec!["port_A".to_string(), "port_B".to_string()];
    let arm_labels = vec!["arm_0".to_string(), "arm_1".to_string()];

    let analytic_port_a = (phase / 2.0).cos().powi(2);

    let mut rng = RandomStream::new(seed, 0);
    let (exact_dists, empirical_dists, final_exact, final_emp);
    if measure_inside {
        let inside_exact: Vec<f64> = inside_ctx
            .projectors()
            .iter()
            .map(|p| {
                pure_born_probability(
                    match &entry_state {
                        SystemState::Modal(q) => q,
                        _ => unreachable!(),
                    },
                    p,
                )
            })
            .collect::<Result<_>>()?;
        let t_inside_out = transition_matrix(&inside_ctx, &output_ctx)?;
        let output_exact: Vec<f64> = (0..2)
            .map(|k| (0..2).map(|m| inside_exact[m] * t_inside_out.entry(m, k)).sum())
            .collect();

        let contexts = [inside_ctx.clone(), output_ctx.clone()];
        let mut records = Vec::with_capacity(2 * trials as usize);
        for _ in 0..trials {
            records.extend(run_sequence(&entry_state, &contexts, &mut rng)?);
        }
        let inside_emp = empirical_distribution_sized(&records, 0, 2)?;
        let output_emp = empirical_distribution_sized(&records, 1, 2)?;

        exact_dists = vec![
            distribution("inside_paths", &arm_labels, inside_exact),
            distribution("output_ports", &port_labels, output_exact.clone()),
        ];
        empirical_dists = vec![
            distribution("inside_paths", &arm_labels, inside_emp),
            distribution("output_ports", &port_labels, output_emp.clone()),
        ];
        final_exact = output_exact;
        final_emp = output_emp;
    } else {
        let output_exact: Vec<f64> = output_ctx
            .projectors()
            .iter()
            .map(|p| {
                pure_born_probability(
                    match &entry_state {
                        SystemState::Modal(q) => q,
                        _ => unreachable!(),
                    },
                    p,
                )
            })
            .collect::<Result<_>>()?;
        let mut records = Vec::with_capacity(trials as usize);
        for _ in 0..trials {
            let (_, _, r) = measure(&entry_state, &output_ctx, &mut rng)?;
            records.push(r);
        }
        let output_emp = empirical_distribution_sized(&records, 0, 2)?;
        exact_dists = vec![distribution("output_ports", &port_labels, output_exact.clone())];
        empirical_dists = vec![distribution("output_ports", &port_labels, output_emp.clone())];
        final_exact = output_exact;
        final_emp = output_emp;
    }

    let gof = goodness_of_fit(&final_emp, &final_exact, trials)?;
    let analytic_dev = if measure_inside {
        (final_exact[0] - 0.5).abs()
    } else {
        (final_exact[0] - analytic_port_a).abs()
    };

    let metrics = BTreeMap::from([
        ("phase".into(), phase),
        ("trials".into(), trials as f64),
        ("measure_inside".into(), if measure_inside { 1.0 } else { 0.0 }),
        ("port_a_exact".into(), final_exact[0]),
        ("port_a_empirical".into(), final_emp[0]),
        ("port_a_analytic".into(), if measure_inside { 0.5 } else { analytic_port_a }),
        ("analytic_deviation".into(), analytic_dev),
        ("output_tv".into(), tv(&final_emp, &final_exact)),
        ("output_chi_square".into(), gof.chi_square),
    ]);

    Ok(ScenarioReport {
        exact_distributions: exact_dists,
        empirical_distributions: empirical_dists,
        derived_metrics: metrics,
        pass: gof.pass && analytic_dev < 1e-12,
    })
}

fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// The singlet extravalence class (|01> - |10>)/sqrt(2).
pub fn singlet_class() -> ExtravalenceClass {
    let s = 1.0 / 2.0_f64.sqrt();
    let v = [
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    ExtravalenceClass::from_projector(
        RankOneProjector::from_vector(&v).expect("singlet vector is unit"),
    )
}

/// Joint context containing the singlet projector, completed by the three
/// total-angular-momentum-one projectors |00>, (|01>+|10>)/sqrt(2), |11>.
pub fn bell_context() -> Context {
    let s = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let vectors = [
        vec![zero, s, -s, zero],
        vec![one, zero, zero, zero],
        vec![zero, s, s, zero],
        vec![zero, zero, zero, one],
    ];
    let projectors: Vec<RankOneProjector> = vectors
        .iter()
        .map(|v| RankOneProjector::from_vector(v).expect("bell vectors are unit"))
        .collect();
    Context::new(projectors, vec![0.0, 1.0, 2.0, 3.0])
        .expect("bell basis is orthonormal")
        .with_name("bell_joint")
}

/// Separated analyzers: tensor products of the local spin-1/2 contexts
/// along `a` and `b`, outcomes ordered (++, +-, -+, --).
pub fn separated_context(a: [f64; 3], b: [f64; 3]) -> Result<Context> {
    let ca = spin_context(0.5, a)?;
    let cb = spin_context(0.5, b)?;
    let mut projectors = Vec::with_capacity(4);
    for pa in ca.projectors() {
        for pb in cb.projectors() {
            projectors.push(RankOneProjector::from_vector(&kron_vec(
                pa.vector(),
                pb.vector(),
            ))?);
        }
    }
    Ok(Context::new(projectors, vec![0.0, 1.0, 2.0, 3.0])?.with_name("separated"))
}

/// Correlation E = p(++) - p(+-) - p(-+) + p(--).
fn correlation(dist: &[f64]) -> f64 {
    dist[0] - dist[1] - dist[2] + dist[3]
}

/// Two spin-1/2 particles prepared in the singlet class. Measured jointly
/// in the Bell-type context, the singlet outcome is certain; measured by
/// separated analyzers along `a` and `b`, each marginal is uniform and the
/// correlation is E(a, b) = -a.b.
pub fn scenario_singlet(a: [f64; 3], b: [f64; 3], trials: u64, seed: u64) -> Result<ScenarioReport> {
    let an = normalize3(a)?;
    let bn = normalize3(b)?;
    let psi = singlet_class();
    let state = SystemState::Modal(psi.representative().clone());

    let joint = bell_context();
    let separated = separated_context(a, b)?;

    let joint_exact: Vec<f64> = joint
        .projectors()
        .iter()
        .map(|p| pure_born_probability(psi.representative(), p))
        .collect::<Result<_>>()?;
    let sep_exact: Vec<f64> = separated
        .projectors()
        .iter()
        .map(|p| pure_born_probability(psi.representative(), p))
        .collect::<Result<_>>()?;

    let e_exact = correlation(&sep_exact);
    let e_analytic = -dot3(an, bn);
    let marginal_dev = [
        sep_exact[0] + sep_exact[1] - 0.5,
        sep_exact[2] + sep_exact[3] - 0.5,
        sep_exact[0] + sep_exact[2] - 0.5,
        sep_exact[1] + sep_exact[3] - 0.5,
    ]
    .iter()
    .fold(0.0_f64, |m, d| m.max(d.abs()));

    let mut rng = RandomStream::new(seed, 0);
    let mut joint_records = Vec::with_capacity(trials as usize);
    let mut sep_records = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let (_, _, r) = measure(&state, &joint, &mut rng)?;
        joint_records.push(r);
        let (_, _, r) = measure(&state, &separated, &mut rng)?;
        sep_records.push(r);
    }
    let joint_emp = empirical_distribution_sized(&joint_records, 0, 4)?;
    let sep_emp = empirical_distribution_sized(&sep_records, 0, 4)?;
    let e_empirical = correlation(&sep_emp);

    let gof = goodness_of_fit(&sep_emp, &sep_exact, trials)?;
    let e_tolerance = 6.0 / (trials as f64).sqrt();

    let joint_labels: Vec<String> = ["singlet", "triplet_m+1", "triplet_m0", "triplet_m-1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let sep_labels: Vec<String> = ["++", "+-", "-+", "--"].iter().map(|s| s.to_string()).collect();

    let pass = (e_exact - e_analytic).abs() < 1e-12
        && marginal_dev < 1e-12
        && joint_exact[0] == 1.0
        && joint_emp[0] == 1.0
        && (e_empirical - e_exact).abs() < e_tolerance
        && gof.pass;

    let metrics = BTreeMap::from([
        ("trials".into(), trials as f64),
        ("a_dot_b".into(), dot3(an, bn)),
        ("e_exact".into(), e_exact),
        ("e_analytic".into(), e_analytic),
        ("e_empirical".into(), e_empirical),
        ("e_tolerance".into(), e_tolerance),
        ("marginal_max_dev".into(), marginal_dev),
        ("joint_singlet_exact".into(), joint_exact[0]),
        ("joint_singlet_empirical".into(), joint_emp[0]),
        ("separated_tv".into(), tv(&sep_emp, &sep_exact)),
        ("separated_chi_square".into(), gof.chi_square),
    ]);

    Ok(ScenarioReport {
        exact_distributions: vec![
            distribution("joint_bell", &joint_labels, joint_exact),
            distribution("separated", &sep_labels, sep_exact),
        ],
        empirical_distributions: vec![
            distribution("joint_bell", &joint_labels, joint_emp),
            distribution("separated", &sep_labels, sep_emp),
        ],
        derived_metrics: metrics,
        pass,
    })
}

/// The four analyzer directions that maximize S for the singlet:
/// a = z, a' = x, and Bob's pair diagonal and anti-diagonal, flipped so
/// that every correlation enters S with a positive sign.
pub fn optimal_chsh_directions() -> ([f64; 3], [f64; 3], [f64; 3], [f64; 3]) {
    let s = 1.0 / 2.0_f64.sqrt();
    (
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [-s, 0.0, -s],
        [-s, 0.0, s],
    )
}

/// CHSH combination S = E(a,b) - E(a,b') + E(a',b) + E(a',b') from four
/// singlet runs. This is standard background rather than part of the
/// contextual kernel; reports carry a `derived_extension` flag.
pub fn scenario_chsh(
    a: [f64; 3],
    a_prime: [f64; 3],
    b: [f64; 3],
    b_prime: [f64; 3],
    trials: u64,
    seed: u64,
) -> Result<ScenarioReport> {
    let pairs = [
        ("ab", a, b),
        ("ab_prime", a, b_prime),
        ("a_prime_b", a_prime, b),
        ("a_prime_b_prime", a_prime, b_prime),
    ];
    let mut exact_dists = Vec::new();
    let mut empirical_dists = Vec::new();
    let mut metrics = BTreeMap::new();
    let mut e_exact = [0.0; 4];
    let mut e_emp = [0.0; 4];
    let mut sub_pass = true;

    for (k, (tag, dir_a, dir_b)) in pairs.into_iter().enumerate() {
        let report = scenario_singlet(dir_a, dir_b, trials, seed.wrapping_add(k as u64))?;
        e_exact[k] = report.metric("e_exact").expect("singlet reports e_exact");
        e_emp[k] = report
            .metric("e_empirical")
            .expect("singlet reports e_empirical");
        sub_pass &= report.pass;
        metrics.insert(format!("e_exact_{tag}"), e_exact[k]);
        metrics.insert(format!("e_empirical_{tag}"), e_emp[k]);
        let mut sep_exact = report.exact_distributions[1].clone();
        sep_exact.name = format!("separated_{tag}");
        exact_dists.push(sep_exact);
        let mut sep_emp = report.empirical_distributions[1].clone();
        sep_emp.name = format!("separated_{tag}");
        empirical_dists.push(sep_emp);
    }

    let s_exact = e_exact[0] - e_exact[1] + e_exact[2] + e_exact[3];
    let s_empirical = e_emp[0] - e_emp[1] + e_emp[2] + e_emp[3];
    let s_tolerance = 12.0 / (trials as f64).sqrt();
    metrics.insert("s_exact".into(), s_exact);
    metrics.insert("s_empirical".into(), s_empirical);
    metrics.insert("s_tolerance".into(), s_tolerance);
    metrics.insert("trials_per_pair".into(), trials as f64);

    Ok(ScenarioReport {
        exact_distributions: exact_dists,
        empirical_distributions: empirical_dists,
        derived_metrics: metrics,
        pass: sub_pass && (s_empirical - s_exact).abs() < s_tolerance,
    })
}

const AVAILABLE_SCENARIOS: &[&str] = &["chsh", "mach_zehnder", "sequential_spin", "singlet"];

fn require<'a>(spec: &'a ScenarioSpec, key: &str) -> Result<&'a ParamValue> {
    spec.parameters.get(key).ok_or_else(|| Error::MissingParameter {
        scenario: spec.name.clone(),
        name: key.to_string(),
    })
}

fn number_param(spec: &ScenarioSpec, key: &str) -> Result<f64> {
    match require(spec, key)? {
        ParamValue::Number(x) => Ok(*x),
        other => Err(Error::InvalidParameter(format!(
            "parameter '{key}' must be a number, got {other:?}"
        ))),
    }
}

fn spin_param(spec: &ScenarioSpec, key: &str) -> Result<f64> {
    match require(spec, key)? {
        ParamValue::Number(x) => Ok(*x),
        ParamValue::Text(t) => parse_half_integer(t),
        other => Err(Error::InvalidParameter(format!(
            "parameter '{key}' must be a number or a rational string, got {other:?}"
        ))),
    }
}

fn vector_param(spec: &ScenarioSpec, key: &str) -> Result<[f64; 3]> {
    match require(spec, key)? {
        ParamValue::Vector(v) if v.len() == 3 => Ok([v[0], v[1], v[2]]),
        other => Err(Error::InvalidParameter(format!(
            "parameter '{key}' must be a 3-vector, got {other:?}"
        ))),
    }
}

fn bool_param_or(spec: &ScenarioSpec, key: &str, default: bool) -> Result<bool> {
    match spec.parameters.get(key) {
        None => Ok(default),
        Some(ParamValue::Bool(b)) => Ok(*b),
        Some(other) => Err(Error::InvalidParameter(format!(
            "parameter '{key}' must be a boolean, got {other:?}"
        ))),
    }
}

fn check_dimension(spec: &ScenarioSpec, expected: usize) -> Result<()> {
    if let Some(d) = spec.dimension {
        if d != expected {
            return Err(Error::InvalidParameter(format!(
                "scenario '{}' has dimension {expected}, spec says {d}",
                spec.name
            )));
        }
    }
    Ok(())
}

/// Dispatch a [`ScenarioSpec`] to the matching scenario.
pub fn load_scenario(spec: &ScenarioSpec) -> Result<ScenarioReport> {
    match spec.name.as_str() {
        "sequential_spin" => {
            let j = spin_param(spec, "j")?;
            check_dimension(spec, (2.0 * j).round() as usize + 1)?;
            scenario_sequential_spin(
                j,
                vector_param(spec, "u")?,
                vector_param(spec, "v")?,
                number_param(spec, "initial_label")?,
                spec.trials,
                spec.seed,
            )
        }
        "mach_zehnder" => {
            check_dimension(spec, 2)?;
            scenario_mach_zehnder(
                number_param(spec, "phase")?,
                bool_param_or(spec, "measure_inside", false)?,
                spec.trials,
                spec.seed,
            )
        }
        "singlet" => {
            check_dimension(spec, 4)?;
            scenario_singlet(
                vector_param(spec, "a")?,
                vector_param(spec, "b")?,
                spec.trials,
                spec.seed,
            )
        }
        "chsh" => {
            check_dimension(spec, 4)?;
            scenario_chsh(
                vector_param(spec, "a")?,
                vector_param(spec, "a_prime")?,
                vector_param(spec, "b")?,
                vector_param(spec, "b_prime")?,
                spec.trials,
                spec.seed,
            )
        }
        unknown => Err(Error::UnknownScenario {
            name: unknown.to_string(),
            available: AVAILABLE_SCENARIOS.join(", "),
        }),
    }
}
