//! Command-line interface: run scenarios, execute verification suites, and
//! simulate measurement-sequence spec files.
//!
//! Exit codes: 0 = all checks pass, 1 = a physics or property check failed,
//! 2 = usage or input error.

mod output;
mod simulate;

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use modality_engine::measurement::{records_to_csv, records_to_json_lines};
use modality_engine::scenarios::{load_scenario, ParamValue, ScenarioSpec};
use modality_engine::verification;

use output::{render_checks, render_scenario, render_simulate, Format, RunMeta};

const DEFAULT_TRIALS: u64 = 100_000;
const SEED_ENV: &str = "MODALITY_ENGINE_SEED";

#[derive(Parser)]
#[command(
    name = "modality-engine",
    version,
    about = "Contextual measurement engine: scenarios, verification suites, and sequence simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Random seed (default 0; the MODALITY_ENGINE_SEED environment
    /// variable overrides the default)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of trials for stochastic runs (default 100000)
    #[arg(long, global = true)]
    trials: Option<u64>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Write output to this file as well: the rendered report for
    /// `scenario` and `verify`, the record log for `simulate`
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run a named scenario (sequential_spin, mach_zehnder, singlet, chsh)
    Scenario {
        name: String,
        /// Interferometer phase in radians (mach_zehnder)
        #[arg(long)]
        phase: Option<f64>,
        /// Insert a which-path measurement inside the interferometer
        #[arg(long)]
        measure_inside: bool,
        /// Spin, as a decimal or rational such as 1/2 (sequential_spin)
        #[arg(long)]
        j: Option<String>,
        /// First measurement direction x,y,z (sequential_spin)
        #[arg(long, value_parser = parse_direction)]
        u: Option<Direction>,
        /// Second measurement direction x,y,z (sequential_spin)
        #[arg(long, value_parser = parse_direction)]
        v: Option<Direction>,
        /// Outcome label the system starts in (sequential_spin)
        #[arg(long)]
        initial_label: Option<f64>,
        /// First analyzer direction x,y,z (singlet, chsh)
        #[arg(long, value_parser = parse_direction)]
        a: Option<Direction>,
        /// Second analyzer direction x,y,z (singlet, chsh)
        #[arg(long, value_parser = parse_direction)]
        b: Option<Direction>,
        /// Alternative first analyzer direction (chsh)
        #[arg(long, value_parser = parse_direction)]
        a_prime: Option<Direction>,
        /// Alternative second analyzer direction (chsh)
        #[arg(long, value_parser = parse_direction)]
        b_prime: Option<Direction>,
    },
    /// Run a property suite (unistochastic, gleason, counterexample,
    /// permutation, extravalence, super-context)
    Verify {
        suite: String,
        /// Comma-separated dimensions, e.g. 2,3,4
        #[arg(long, value_parser = parse_dims)]
        dims: Option<DimList>,
        /// Samples per dimension (pairs, contexts, or corpora, depending
        /// on the suite)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Run a measurement-sequence spec file
    Simulate {
        /// JSON file {dimension, initial, contexts, trials, seed}
        spec_path: PathBuf,
    },
}

type Direction = [f64; 3];

fn parse_direction(s: &str) -> Result<Direction, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z — got '{s}'"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("'{part}' is not a number"))?;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
struct DimList(Vec<usize>);

fn parse_dims(s: &str) -> Result<DimList, String> {
    let dims: Result<Vec<usize>, _> = s.split(',').map(|p| p.trim().parse::<usize>()).collect();
    match dims {
        Ok(d) if !d.is_empty() => Ok(DimList(d)),
        _ => Err(format!("expected a comma-separated dimension list, got '{s}'")),
    }
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<modality_engine::Error> for CliError {
    fn from(e: modality_engine::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(pass) => std::process::exit(if pass { 0 } else { 1 }),
        Err(e) => {
            eprintln!("error: {}", e.message());
            std::process::exit(e.code());
        }
    }
}

fn effective_seed(cli_seed: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = cli_seed {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}='{text}' is not a valid seed"))),
        Err(_) => Ok(0),
    }
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    if let Some(path) = path {
        std::fs::write(path, content)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let seed = effective_seed(cli.seed)?;
    let trials = cli.trials.unwrap_or(DEFAULT_TRIALS);

    match cli.command {
        Command::Scenario {
            name,
            phase,
            measure_inside,
            j,
            u,
            v,
            initial_label,
            a,
            b,
            a_prime,
            b_prime,
        } => {
            let mut parameters = BTreeMap::new();
            if let Some(x) = phase {
                parameters.insert("phase".into(), ParamValue::Number(x));
            }
            parameters.insert("measure_inside".into(), ParamValue::Bool(measure_inside));
            if let Some(x) = j {
                parameters.insert("j".into(), ParamValue::Text(x));
            }
            if let Some(x) = initial_label {
                parameters.insert("initial_label".into(), ParamValue::Number(x));
            }
            for (key, dir) in [
                ("u", u),
                ("v", v),
                ("a", a),
                ("b", b),
                ("a_prime", a_prime),
                ("b_prime", b_prime),
            ] {
                if let Some(d) = dir {
                    parameters.insert(key.into(), ParamValue::Vector(d.to_vec()));
                }
            }
            let spec = ScenarioSpec {
                name: name.clone(),
                dimension: None,
                parameters,
                trials,
                seed,
            };
            let report = load_scenario(&spec)?;
            let meta = RunMeta {
                command: format!("scenario {name}"),
                seed,
                trials,
            };
            let rendered = render_scenario(&meta, &report, cli.format);
            print!("{rendered}");
            write_output(&cli.output, &rendered)?;
            Ok(report.pass)
        }

        Command::Verify {
            suite,
            dims,
            samples,
        } => {
            let dims = dims.map(|d| d.0);
            let checks = match suite.as_str() {
                "unistochastic" => verification::verify_unistochastic(
                    &dims.unwrap_or_else(|| (2..=8).collect()),
                    samples.unwrap_or(200),
                    seed,
                )?,
                "gleason" => verification::verify_gleason(
                    &dims.unwrap_or_else(|| vec![3]),
                    samples.unwrap_or(20),
                    seed,
                )?,
                "counterexample" => {
                    verification::verify_counterexample(samples.unwrap_or(50), seed)?
                }
                "permutation" => verification::verify_permutation(
                    &dims.unwrap_or_else(|| (2..=6).collect()),
                    101,
                )?,
                "extravalence" => verification::verify_extravalence(
                    &dims.unwrap_or_else(|| vec![2, 3, 4]),
                    samples.unwrap_or(25),
                    seed,
                )?,
                "super-context" => verification::verify_super_context(
                    &dims.unwrap_or_else(|| (2..=6).collect()),
                    samples.unwrap_or(100),
                    seed,
                )?,
                unknown => {
                    return Err(CliError::Usage(format!(
                        "unknown suite '{unknown}'; available: unistochastic, gleason, \
                         counterexample, permutation, extravalence, super-context"
                    )))
                }
            };
            let meta = RunMeta {
                command: format!("verify {suite}"),
                seed,
                trials,
            };
            let rendered = render_checks(&meta, &checks, cli.format);
            print!("{rendered}");
            write_output(&cli.output, &rendered)?;
            Ok(checks.iter().all(|c| c.pass))
        }

        Command::Simulate { spec_path } => {
            let text = std::fs::read_to_string(&spec_path).map_err(|e| {
                CliError::Usage(format!("cannot read {}: {e}", spec_path.display()))
            })?;
            let spec: simulate::SimulateSpec = serde_json::from_str(&text).map_err(|e| {
                CliError::Usage(format!("cannot parse {}: {e}", spec_path.display()))
            })?;
            let run_trials = spec.trials.unwrap_or(trials);
            let run_seed = spec.seed.unwrap_or(seed);
            let outcome = simulate::run(&spec, run_trials, run_seed)?;
            let meta = RunMeta {
                command: format!("simulate {}", spec_path.display()),
                seed: run_seed,
                trials: run_trials,
            };
            let rendered = render_simulate(&meta, &outcome, cli.format);
            print!("{rendered}");
            let log = match cli.format {
                Format::Csv => records_to_csv(&outcome.records),
                _ => records_to_json_lines(&outcome.records),
            };
            write_output(&cli.output, &log)?;
            Ok(outcome.pass)
        }
    }
}
