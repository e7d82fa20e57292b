//! `trimfit`: fit robust regression estimators on CSV data, replay the
//! built-in comparison example, run benchmark manifests, and emit
//! plot-ready data files.
//!
//! Exit codes: 0 on success, 1 for data or numerical failures, 2 for
//! usage and parse errors.

use clap::{Parser, Subcommand};

use trimfit_cli::error::Result;
use trimfit_cli::{bench, example1, fit, plotdata};

#[derive(Debug, Parser)]
#[command(name = "trimfit", version, about = "Robust linear regression toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit one estimator to a CSV dataset.
    Fit(fit::FitArgs),
    /// Compare trimming criteria on the built-in seven-point dataset.
    Example1,
    /// Run benchmark scenarios from a manifest and write reports.
    Bench(bench::BenchArgs),
    /// Write gnuplot-ready scatter and fitted-line files (one predictor).
    Plotdata(plotdata::PlotdataArgs),
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Fit(args) => fit::run(args),
        Command::Example1 => example1::run(),
        Command::Bench(args) => bench::run(args),
        Command::Plotdata(args) => plotdata::run(args),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
