mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{RunConfig, UsageError};

#[derive(Parser)]
#[command(name = "ivpp", version, about = "Periodic points, invariant varieties and Julia sets of integrable maps")]
struct Cli {
    /// TOML file with settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// γ_n for the generic biquadratic map (and 3dLV with --lv) as JSON.
    GammaSeries(RunConfig),
    /// Points of exact period n of z -> z(h'+z)/(1+hz).
    PeriodicPoints(RunConfig),
    /// Period-n points as h' approaches 1/h.
    TransitionScan(RunConfig),
    /// Distance of sampled Julia points from the integrable limit set.
    JuliaScan(RunConfig),
    /// Iterates a catalog map and tracks its invariants.
    Orbit(RunConfig),
    /// Samples an invariant variety and checks every point is periodic.
    VerifyVariety(RunConfig),
}

impl Command {
    fn split(self) -> (&'static str, RunConfig) {
        match self {
            Command::GammaSeries(c) => ("gamma-series", c),
            Command::PeriodicPoints(c) => ("periodic-points", c),
            Command::TransitionScan(c) => ("transition-scan", c),
            Command::JuliaScan(c) => ("julia-scan", c),
            Command::Orbit(c) => ("orbit", c),
            Command::VerifyVariety(c) => ("verify-variety", c),
        }
    }
}

fn run(cli: Cli) -> Result<Option<String>> {
    let (name, flags) = cli.command.split();
    let cfg = match &cli.config {
        Some(path) => flags.over(&RunConfig::load(path)?),
        None => flags,
    };
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("setting up the worker pool")?;
    }
    let out = commands::run(name, &cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, &out.text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", out.text),
    }
    Ok(out.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("verification failed: {failure}");
            ExitCode::from(2)
        }
        Err(e) if e.downcast_ref::<UsageError>().is_some() => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
