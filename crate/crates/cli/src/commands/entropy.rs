use std::path::PathBuf;

use gqmp_core::{gaussian_entropy, local_diagonal, EntropyReport, Tolerances};
use serde_json::json;

use super::Outcome;
use crate::failure::Failure;
use crate::input::{self, fmt, Vector};
use crate::report::{table, Recorder};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Local symplectic diagonal, comma-separated, every entry >= 1.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "matrix", required_unless_present = "matrix")]
    c: Option<Vector>,
    /// Covariance matrix file of a physical state.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

pub fn run(args: &Args, tol: Tolerances) -> Result<Outcome, Failure> {
    let mut rec = Recorder::new("entropy", tol);
    let (c, global) = match (&args.c, &args.matrix) {
        (Some(c), _) => {
            rec.vector("c", &c.0);
            (c.0.clone(), None)
        }
        (None, Some(path)) => {
            let (gamma, text) = input::read_covariance(path, &tol)?;
            rec.input("matrix", text.as_bytes());
            gamma.require_physical(&tol)?;
            let c = local_diagonal(&gamma)?.unsorted;
            (c, Some(gaussian_entropy(&gamma, &tol)?))
        }
        (None, None) => return Err(Failure::input("give --c or --matrix")),
    };
    let report = EntropyReport::from_locals(&c, &tol)?;

    let rows: Vec<Vec<String>> = c
        .iter()
        .zip(&report.per_mode_entropies)
        .enumerate()
        .map(|(k, (c, s))| vec![(k + 1).to_string(), fmt(*c), fmt(*s)])
        .collect();
    table(&["mode", "c", "s(c)"], &rows);
    eprintln!("s(sum c) = {}", fmt(report.global_upper_bound));
    if let Some(g) = global {
        eprintln!("global entropy sum s(d) = {}", fmt(g));
    }

    let details = json!({
        "c": c,
        "per_mode_entropies": report.per_mode_entropies,
        "total_local_sum": report.total_local_sum,
        "global_upper_bound": report.global_upper_bound,
        "purity_consistent": report.purity_consistent,
        "global_entropy": global,
        "global_within_bound": global.map(|g| g <= report.global_upper_bound + tol.ineq),
    });
    Ok(Outcome::ok(rec.finish("ok", None, details)))
}
