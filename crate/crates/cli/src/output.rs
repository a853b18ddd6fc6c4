//! Rendering of reports as human tables, JSON documents, or flat CSV.
//! Identical inputs produce byte-identical output in every format.

use modality_engine::reconstruction::CheckReport;
use modality_engine::scenarios::ScenarioReport;

use crate::simulate::SimulateOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Fixed 6-significant-digit, locale-independent rendering.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.000000".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..=8).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.5e}")
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Report header: every run states the seed and trial count in effect.
pub struct RunMeta {
    pub command: String,
    pub seed: u64,
    pub trials: u64,
}

impl RunMeta {
    fn table_header(&self) -> String {
        format!(
            "# modality-engine {}\n# seed: {}\n# trials: {}\n",
            self.command, self.seed, self.trials
        )
    }

    fn csv_header(&self) -> String {
        format!(
            "section,key,value\nmeta,command,{}\nmeta,seed,{}\nmeta,trials,{}\n",
            csv_escape(&self.command),
            self.seed,
            self.trials
        )
    }
}

pub fn render_scenario(meta: &RunMeta, report: &ScenarioReport, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "command": meta.command,
                "seed": meta.seed,
                "trials": meta.trials,
                "report": report,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("report is serializable"))
        }
        Format::Table => {
            let mut out = meta.table_header();
            out.push_str(&format!("# pass: {}\n\n", report.pass));
            for (title, dists) in [
                ("exact", &report.exact_distributions),
                ("empirical", &report.empirical_distributions),
            ] {
                out.push_str(&format!("{title} distributions:\n"));
                for d in dists {
                    let cells: Vec<String> = d
                        .labels
                        .iter()
                        .zip(&d.probabilities)
                        .map(|(l, p)| format!("{l}={}", sig6(*p)))
                        .collect();
                    out.push_str(&format!("  {:24} {}\n", d.name, cells.join("  ")));
                }
            }
            out.push_str("metrics:\n");
            for (k, v) in &report.derived_metrics {
                out.push_str(&format!("  {k:28} {}\n", sig6(*v)));
            }
            out
        }
        Format::Csv => {
            let mut out = meta.csv_header();
            for (section, dists) in [
                ("exact", &report.exact_distributions),
                ("empirical", &report.empirical_distributions),
            ] {
                for d in dists {
                    for (l, p) in d.labels.iter().zip(&d.probabilities) {
                        out.push_str(&format!(
                            "{section},{},{p}\n",
                            csv_escape(&format!("{}.{l}", d.name))
                        ));
                    }
                }
            }
            for (k, v) in &report.derived_metrics {
                out.push_str(&format!("metric,{},{v}\n", csv_escape(k)));
            }
            out.push_str(&format!("result,pass,{}\n", report.pass));
            out
        }
    }
}

pub fn render_checks(meta: &RunMeta, checks: &[CheckReport], format: Format) -> String {
    let all_pass = checks.iter().all(|c| c.pass);
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "command": meta.command,
                "seed": meta.seed,
                "trials": meta.trials,
                "checks": checks,
                "pass": all_pass,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("checks are serializable"))
        }
        Format::Table => {
            let mut out = meta.table_header();
            out.push_str(&format!("# pass: {all_pass}\n\n"));
            for c in checks {
                out.push_str(&format!(
                    "{:32} {}\n",
                    c.check_name,
                    if c.pass { "PASS" } else { "FAIL" }
                ));
                for (k, v) in &c.metrics {
                    out.push_str(&format!("    {k:28} {}\n", sig6(*v)));
                }
            }
            out
        }
        Format::Csv => {
            let mut out = meta.csv_header();
            for c in checks {
                out.push_str(&format!(
                    "check,{},{}\n",
                    csv_escape(&c.check_name),
                    if c.pass { "pass" } else { "fail" }
                ));
                for (k, v) in &c.metrics {
                    out.push_str(&format!(
                        "metric,{},{v}\n",
                        csv_escape(&format!("{}.{k}", c.check_name))
                    ));
                }
            }
            out.push_str(&format!("result,pass,{all_pass}\n"));
            out
        }
    }
}

pub fn render_simulate(meta: &RunMeta, outcome: &SimulateOutcome, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "command": meta.command,
                "seed": meta.seed,
                "trials": meta.trials,
                "steps": outcome.steps,
                "pass": outcome.pass,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("outcome is serializable"))
        }
        Format::Table => {
            let mut out = meta.table_header();
            out.push_str(&format!("# pass: {}\n\n", outcome.pass));
            for s in &outcome.steps {
                out.push_str(&format!(
                    "step {} ({}), tv={}, chi2={}, {}\n",
                    s.step,
                    s.context_id,
                    sig6(s.tv_distance),
                    sig6(s.chi_square),
                    if s.pass { "PASS" } else { "FAIL" }
                ));
                let exact: Vec<String> = s.exact.iter().map(|p| sig6(*p)).collect();
                let emp: Vec<String> = s.empirical.iter().map(|p| sig6(*p)).collect();
                out.push_str(&format!("    exact     {}\n", exact.join("  ")));
                out.push_str(&format!("    empirical {}\n", emp.join("  ")));
            }
            out
        }
        Format::Csv => {
            let mut out = meta.csv_header();
            for s in &outcome.steps {
                for (i, p) in s.exact.iter().enumerate() {
                    out.push_str(&format!("exact,step{}.{i},{p}\n", s.step));
                }
                for (i, p) in s.empirical.iter().enumerate() {
                    out.push_str(&format!("empirical,step{}.{i},{p}\n", s.step));
                }
                out.push_str(&format!("check,step{}.tv,{}\n", s.step, s.tv_distance));
                out.push_str(&format!("check,step{}.chi_square,{}\n", s.step, s.chi_square));
                out.push_str(&format!(
                    "check,step{}.pass,{}\n",
                    s.step,
                    if s.pass { "pass" } else { "fail" }
                ));
            }
            out.push_str(&format!("result,pass,{}\n", outcome.pass));
            out
        }
    }
}
