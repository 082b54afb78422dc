//! `gqmp`: feasibility checks, synthesis, decompositions, entropy reports,
//! preparation circuits and batch verification for Gaussian covariance
//! matrices.
//!
//! Every run prints one JSON record on stdout and human-readable tables on
//! stderr. Exit codes: 0 success or feasible, 1 infeasible (or verification
//! violations), 2 input error, 3 internal verification failure.

mod commands;
mod failure;
mod input;
mod matfile;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::commands::{check, decompose, entropy, prepare, synth, verify};

#[derive(Debug, Parser)]
#[command(name = "gqmp", version, about = "Local marginals and symplectic spectra of Gaussian states")]
struct Cli {
    /// Feasibility tolerance; overrides the GQMP_TOL_INEQ environment variable.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether local diagonal c and spectrum d are compatible.
    Check(check::Args),
    /// Build a covariance matrix with prescribed c and d.
    Synth(synth::Args),
    /// Williamson normal form of a covariance file.
    Williamson(decompose::WilliamsonArgs),
    /// Euler decomposition of a symplectic file.
    Euler(decompose::EulerArgs),
    /// Local entropies and the global entropy estimate.
    Entropy(entropy::Args),
    /// Emit a preparation circuit.
    Prepare(prepare::Args),
    /// Run the sampled property suites.
    Verify(verify::Args),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Check(_) => "check",
            Command::Synth(_) => "synth",
            Command::Williamson(_) => "williamson",
            Command::Euler(_) => "euler",
            Command::Entropy(_) => "entropy",
            Command::Prepare(_) => "prepare",
            Command::Verify(_) => "verify",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let outcome = input::tolerances(cli.tol).and_then(|tol| match &cli.command {
        Command::Check(a) => check::run(a, tol),
        Command::Synth(a) => synth::run(a, tol),
        Command::Williamson(a) => decompose::williamson(a, tol),
        Command::Euler(a) => decompose::euler(a, tol),
        Command::Entropy(a) => entropy::run(a, tol),
        Command::Prepare(a) => prepare::run(a, tol),
        Command::Verify(a) => verify::run(a, tol),
    });
    match outcome {
        Ok(outcome) => {
            report::emit(&outcome.record);
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {failure}");
            println!(
                "{}",
                json!({
                    "command": name,
                    "verdict": failure.label(),
                    "message": failure.to_string(),
                    "exit_code": failure.exit_code(),
                })
            );
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}
