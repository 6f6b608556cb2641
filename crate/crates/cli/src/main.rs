//! `gmrk` command-line front end.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use config::RunConfig;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numeric(_) | Failure::Check(_) => 3,
        }
    }
}

impl From<gmrk::Error> for Failure {
    fn from(e: gmrk::Error) -> Self {
        match e.root() {
            gmrk::Error::Domain(_) => Failure::Config(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gmrk", version, about = "Probabilistic Runge-Kutta solvers with calibrated uncertainty")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a built-in problem and dump the posterior on a grid
    Solve(RunConfig),
    /// Estimate the local order from single-step errors over several h
    Converge(RunConfig),
    /// Compare a square-exponential extrapolator against the GMRK solver
    CompareSe(RunConfig),
    /// Print a Butcher tableau and its order-condition residuals
    Tableau(RunConfig),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GMRK_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(flags) => RunConfig::load(flags).and_then(|c| commands::solve(&c)),
        Command::Converge(flags) => RunConfig::load(flags).and_then(|c| commands::converge(&c)),
        Command::CompareSe(flags) => RunConfig::load(flags).and_then(|c| commands::compare_se(&c)),
        Command::Tableau(flags) => RunConfig::load(flags).and_then(|c| commands::tableau(&c)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gmrk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
