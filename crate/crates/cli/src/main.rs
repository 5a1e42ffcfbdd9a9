#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! `qgd` command-line driver.
//!
//! Exit codes: `0` converged, `1` input or validation error, `2` iteration
//! budget exhausted.

mod cli;
mod coeffs;
mod mds;
mod optimize;
mod output;
mod repro;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    Exhausted,
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    match cli.command {
        Command::Optimize(args) => optimize::run(&args),
        Command::Repro(args) => repro::run(&args),
        Command::Mds(args) => mds::run(&args),
        Command::EstimateCoeffs(args) => coeffs::run(&args),
        Command::ExampleProblem(args) => optimize::example(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Converged) => ExitCode::SUCCESS,
        Ok(Status::Exhausted) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
