mod config;
mod run;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{RunConfig, EXPERIMENTS};

#[derive(Parser, Debug)]
#[command(
    name = "fermibundle",
    version,
    about = "Run a fermibundle experiment and write a JSON report",
    after_help = "Experiments: holonomy-audit, constructions-compare, equivalence, anyon-sweep, \
                  d1-boundary, bohm-run, bohm-ensemble, fock-demo.\n\
                  Exit status: 0 all checks pass, 1 a check or the run failed, 2 usage error."
)]
struct Cli {
    /// Experiment to run; overrides `experiment` in the config file.
    experiment: Option<String>,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (default `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Integrator tolerance for the Bohmian experiments.
    #[arg(long)]
    tol: Option<f64>,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("experiments: {}", EXPERIMENTS.join(", "));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => match RunConfig::parse_text(&text) {
                Ok(cfg) => cfg,
                Err(e) => return usage_error(format!("{}: {e}", path.display())),
            },
            Err(e) => return usage_error(format!("{}: {e}", path.display())),
        },
        None => RunConfig::default(),
    };
    if let Some(e) = cli.experiment {
        cfg.experiment = e;
    }
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    let cfg = match cfg.resolve() {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(e),
    };
    match run::run(&cfg) {
        Ok((path, passed)) => {
            println!("report: {}", path.display());
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
