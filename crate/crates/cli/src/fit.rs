//! The `fit` subcommand: one estimator on one CSV file.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;
use trimfit_core::{
    default_h, ls_fit, lst_fit, lts_concentration, lts_exhaustive, objective_lst, Dataset,
    FitResult, HRule, LstConfig, LtsConfig, TrimConfig,
};

use crate::error::{CliError, Result};
use crate::table::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Ordinary least squares.
    Ls,
    /// Least trimmed squares via random-start concentration.
    Lts,
    /// Least trimmed squares by exhaustive subset enumeration.
    LtsExact,
    /// Depth-trimmed least squares via randomized candidate search.
    Lst,
}

impl MethodArg {
    pub fn name(&self) -> &'static str {
        match self {
            MethodArg::Ls => "ls",
            MethodArg::Lts => "lts",
            MethodArg::LtsExact => "lts-exact",
            MethodArg::Lst => "lst",
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV file with a header row.
    pub file: PathBuf,

    /// Response column name.
    #[arg(long, default_value = "y")]
    pub response: String,

    /// Estimator to fit.
    #[arg(long, value_enum, default_value_t = MethodArg::Lst)]
    pub method: MethodArg,

    /// Outlyingness cutoff for the depth-trimmed search (>= 1).
    #[arg(long, default_value_t = 3.0)]
    pub alpha: f64,

    /// Coverage count for trimmed squares; default (n + p + 1) / 2.
    #[arg(long)]
    pub h: Option<usize>,

    /// Pair-sampling replications for the depth-trimmed search;
    /// default 50, clamped to n(n-1)/2.
    #[arg(long)]
    pub reps: Option<usize>,

    /// Candidate perturbation step for the depth-trimmed search.
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,

    /// RNG seed.
    #[arg(long, env = "TRIMFIT_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Write the JSON report to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Report elapsed time as zero so reruns are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
}

/// Search parameters echoed into the report; only the ones the chosen
/// method actually consumed are present.
#[derive(Debug, Serialize)]
struct ParamsReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replications: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<usize>,
}

#[derive(Debug, Serialize)]
struct FitReport<'a> {
    schema_version: u32,
    method: &'a str,
    n: usize,
    p: usize,
    response: &'a str,
    predictors: &'a [String],
    /// Intercept first.
    coefficients: &'a [f64],
    objective: f64,
    /// Outlyingness criterion re-evaluated at the returned coefficients;
    /// the kept set is recomputed there, so this can differ from
    /// `objective`. Present for the lst method only.
    #[serde(skip_serializing_if = "Option::is_none")]
    objective_lst: Option<f64>,
    /// 1-based row numbers of the observations the fit kept.
    kept: Vec<usize>,
    kept_count: usize,
    evaluations: u64,
    seed: u64,
    elapsed_seconds: f64,
    params: ParamsReport,
}

pub struct FittedCommand {
    pub fit: FitResult,
    pub params: (Option<f64>, Option<f64>, Option<usize>, Option<usize>),
    /// Outlyingness criterion at the returned coefficients (lst only).
    pub objective_lst: Option<f64>,
}

/// Resolves defaults and dispatches to the requested estimator.
pub fn run_method(d: &Dataset, args: &FitArgs) -> Result<FittedCommand> {
    let pair_cap = d.n() * (d.n() - 1) / 2;
    match args.method {
        MethodArg::Ls => Ok(FittedCommand {
            fit: ls_fit(d, None)?,
            params: (None, None, None, None),
            objective_lst: None,
        }),
        MethodArg::Lts | MethodArg::LtsExact => {
            let h = match args.h {
                Some(h) => h,
                None => default_h(d.n(), d.p(), HRule::LtsRegDefault)?,
            };
            let fit = if args.method == MethodArg::LtsExact {
                lts_exhaustive(d, h)?
            } else {
                lts_concentration(d, &LtsConfig::new(h, args.seed))?
            };
            Ok(FittedCommand {
                fit,
                params: (None, None, None, Some(h)),
                objective_lst: None,
            })
        }
        MethodArg::Lst => {
            let replications = args.reps.unwrap_or_else(|| pair_cap.min(50)).max(1);
            let config = LstConfig {
                alpha: args.alpha,
                delta: args.delta,
                replications,
                seed: args.seed,
            };
            let fit = lst_fit(d, &config)?;
            let at_fit = objective_lst(d, &fit.coefficients, TrimConfig::new(args.alpha)?)?;
            Ok(FittedCommand {
                fit,
                params: (Some(args.alpha), Some(args.delta), Some(replications), None),
                objective_lst: Some(at_fit),
            })
        }
    }
}

fn human_summary(
    args: &FitArgs,
    names: &[String],
    d: &Dataset,
    fitted: &FittedCommand,
    elapsed_seconds: f64,
) -> String {
    let fit = &fitted.fit;
    let mut out = String::new();
    out.push_str(&format!(
        "method: {}\nfile: {} (n = {}, p = {})\n",
        args.method.name(),
        args.file.display(),
        d.n(),
        d.p()
    ));
    out.push_str(&format!(
        "  intercept  {:+.6}\n",
        fit.coefficients.intercept()
    ));
    for (name, slope) in names.iter().zip(fit.coefficients.slopes()) {
        out.push_str(&format!("  {name:<9}  {slope:+.6}\n"));
    }
    out.push_str(&format!("objective: {:.6}\n", fit.objective));
    if let Some(at_fit) = fitted.objective_lst {
        out.push_str(&format!("criterion at fit: {at_fit:.6}\n"));
    }
    out.push_str(&format!(
        "kept: {} of {} rows\nelapsed: {:.3} ms\n",
        fit.kept.len(),
        d.n(),
        elapsed_seconds * 1e3
    ));
    out
}

pub fn run(args: &FitArgs) -> Result<()> {
    let table = CsvTable::read_path(&args.file)?;
    let (d, names) = table.to_dataset(&args.response)?;
    let fitted = run_method(&d, args)?;
    let fit = &fitted.fit;
    let elapsed_seconds = if args.no_timing {
        0.0
    } else {
        fit.elapsed.as_secs_f64()
    };

    let (alpha, delta, replications, h) = fitted.params;
    let report = FitReport {
        schema_version: 1,
        method: args.method.name(),
        n: d.n(),
        p: d.p(),
        response: &args.response,
        predictors: &names,
        coefficients: fit.coefficients.as_slice(),
        objective: fit.objective,
        objective_lst: fitted.objective_lst,
        kept: fit.kept.iter().map(|i| i + 1).collect(),
        kept_count: fit.kept.len(),
        evaluations: fit.evaluations,
        seed: args.seed,
        elapsed_seconds,
        params: ParamsReport {
            alpha,
            delta,
            replications,
            h,
        },
    };
    let json = serde_json::to_string_pretty(&report).expect("fit report serialization cannot fail");

    print!(
        "{}",
        human_summary(args, &names, &d, &fitted, elapsed_seconds)
    );
    match &args.out {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    Ok(())
}
