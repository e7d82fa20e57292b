//! The `plotdata` subcommand: scatter points plus fitted lines for
//! one-predictor datasets, in a format gnuplot can read directly.

use std::path::{Path, PathBuf};

use clap::Args;
use trimfit_core::{
    default_h, ls_fit, lst_fit, lts_concentration, Coefficients, Dataset, HRule, LstConfig,
    LtsConfig,
};

use crate::error::{CliError, Result};
use crate::table::CsvTable;

#[derive(Debug, Args)]
pub struct PlotdataArgs {
    /// CSV file with a header row and exactly one predictor column.
    pub file: PathBuf,

    /// Response column name.
    #[arg(long, default_value = "y")]
    pub response: String,

    /// Directory for points.dat and lines.dat (created if absent).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,

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
}

/// The three fitted lines, as (method, intercept, slope) rows.
pub fn fitted_lines(d: &Dataset, args: &PlotdataArgs) -> Result<Vec<(&'static str, f64, f64)>> {
    let h = match args.h {
        Some(h) => h,
        None => default_h(d.n(), d.p(), HRule::LtsRegDefault)?,
    };
    let replications = args
        .reps
        .unwrap_or_else(|| (d.n() * (d.n() - 1) / 2).min(50))
        .max(1);
    let lst_config = LstConfig {
        alpha: args.alpha,
        delta: args.delta,
        replications,
        seed: args.seed,
    };

    let line = |c: &Coefficients| (c.intercept(), c.slopes()[0]);
    let ls = line(&ls_fit(d, None)?.coefficients);
    let lts = line(&lts_concentration(d, &LtsConfig::new(h, args.seed))?.coefficients);
    let lst = line(&lst_fit(d, &lst_config)?.coefficients);
    Ok(vec![
        ("ls", ls.0, ls.1),
        ("lts", lts.0, lts.1),
        ("lst", lst.0, lst.1),
    ])
}

pub fn render_points(d: &Dataset) -> String {
    let mut out = String::from("# x y\n");
    for i in 0..d.n() {
        out.push_str(&format!("{} {}\n", d.predictor_row(i)[0], d.response(i)));
    }
    out
}

pub fn render_lines(lines: &[(&'static str, f64, f64)]) -> String {
    let mut out = String::from("# method intercept slope\n");
    for (method, intercept, slope) in lines {
        out.push_str(&format!("{method} {intercept} {slope}\n"));
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))
}

pub fn run(args: &PlotdataArgs) -> Result<()> {
    let table = CsvTable::read_path(&args.file)?;
    let (d, _) = table.to_dataset(&args.response)?;
    if d.p() != 2 {
        return Err(CliError::usage(format!(
            "plot data requires one predictor; {} has {}",
            args.file.display(),
            d.p() - 1
        )));
    }
    let lines = fitted_lines(&d, args)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", args.out.display())))?;
    write_file(&args.out.join("points.dat"), &render_points(&d))?;
    write_file(&args.out.join("lines.dat"), &render_lines(&lines))?;
    println!(
        "wrote points.dat ({} rows) and lines.dat ({} fits) to {}",
        d.n(),
        lines.len(),
        args.out.display()
    );
    Ok(())
}
