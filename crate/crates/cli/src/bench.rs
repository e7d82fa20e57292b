//! The `bench` subcommand: run manifest scenarios and write reports.
//!
//! Each scenario-method pair gets one JSON report in the output
//! directory (`<id>_<method>.json`); a flat `summary.csv` collects every
//! pair. Replications are deterministic in the scenario seed regardless
//! of `--parallelism`, so only the timing columns vary between runs.

use std::path::{Path, PathBuf};

use clap::Args;
use trimfit_core::sim::{report_json, summary_csv, SummaryRow};
use trimfit_core::{run_benchmark, MetricsReport};

use crate::error::{CliError, Result};
use crate::manifest::{self, PlannedScenario};

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Manifest file with `[[scenario]]` tables.
    pub manifest: PathBuf,

    /// Directory for the JSON reports and summary.csv (created if absent).
    #[arg(long, default_value = "bench-out")]
    pub out: PathBuf,

    /// Worker threads for replications; 1 runs them serially.
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,

    /// Replaces every scenario seed from the manifest.
    #[arg(long, env = "TRIMFIT_SEED")]
    pub seed: Option<u64>,

    /// Write timing columns as zero so reruns are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
}

struct ScenarioResult {
    scenario: PlannedScenario,
    reports: Vec<(trimfit_core::Method, MetricsReport)>,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn run(args: &BenchArgs) -> Result<()> {
    let plan = manifest::load(&args.manifest, args.seed)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", args.out.display())))?;

    let mut results = Vec::with_capacity(plan.len());
    for scenario in plan {
        let reports = run_benchmark(
            &scenario.config,
            &scenario.methods,
            &scenario.settings,
            args.parallelism,
        )?;
        let ordered: Vec<_> = scenario
            .methods
            .iter()
            .map(|m| (*m, reports[m].clone()))
            .collect();
        for (method, report) in &ordered {
            println!(
                "{} {}: emse {:.6} re {} failures {}",
                scenario.id,
                method,
                report.emse,
                report
                    .re
                    .map_or_else(|| "-".to_owned(), |re| format!("{re:.4}")),
                report.failures
            );
        }
        results.push(ScenarioResult {
            scenario,
            reports: ordered,
        });
    }

    let mut summary = Vec::new();
    for result in &results {
        for (method, report) in &result.reports {
            let json = report_json(
                &result.scenario.id,
                &result.scenario.config,
                *method,
                report,
                !args.no_timing,
            );
            let name = format!("{}_{}.json", result.scenario.id, method);
            write_file(&args.out.join(name), &(json + "\n"))?;
            summary.push(SummaryRow {
                scenario_id: &result.scenario.id,
                config: &result.scenario.config,
                method: *method,
                report,
            });
        }
    }
    write_file(
        &args.out.join("summary.csv"),
        &summary_csv(&summary, !args.no_timing),
    )?;
    println!("wrote {} reports to {}", summary.len(), args.out.display());
    Ok(())
}
