use std::path::PathBuf;

use gqmp_core::{check_mixed, local_diagonal, symplectic_eigenvalues, synthesize, CovarianceMatrix, Tolerances};
use serde_json::json;

use super::Outcome;
use crate::failure::Failure;
use crate::input::{self, fmt, Vector};
use crate::matfile::MatrixKind;
use crate::report::{table, Recorder};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Local symplectic diagonal, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    c: Vector,
    /// Symplectic spectrum, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    d: Vector,
    /// Output matrix file. Without it the matrix is embedded in the report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the step log as JSON next to the output (`<out>.trace.json`).
    #[arg(long, requires = "out")]
    emit_trace: bool,
}

pub fn run(args: &Args, tol: Tolerances) -> Result<Outcome, Failure> {
    let mut rec = Recorder::new("synth", tol);
    if args.c.0.len() != args.d.0.len() {
        return Err(Failure::Input(format!(
            "--c has {} entries but --d has {}",
            args.c.0.len(),
            args.d.0.len()
        )));
    }
    let (c, cp) = input::sorted(&args.c.0);
    let (d, dp) = input::sorted(&args.d.0);
    rec.vector("c", &c);
    rec.vector("d", &d);

    let verdict = check_mixed(&c, &d, &tol)?;
    if !verdict.feasible {
        eprintln!("verdict: infeasible (worst slack {})", fmt(verdict.min_slack()));
        let details = json!({ "c": c, "c_permutation": cp, "d": d, "d_permutation": dp });
        return Ok(Outcome {
            record: rec.finish("infeasible", Some(verdict.slacks), details),
            code: 1,
        });
    }
    let trace = synthesize(&c, &d, &tol)?;
    let built = trace.final_matrix.matrix();

    let written = match &args.out {
        Some(path) => input::write_matrix(path, MatrixKind::Covariance, built)?,
        None => built.clone(),
    };
    if let (true, Some(path)) = (args.emit_trace, &args.out) {
        let trace_path = input::with_suffix(path, ".trace.json");
        let text = serde_json::to_string_pretty(&trace).map_err(|e| Failure::Internal(e.to_string()))?;
        std::fs::write(&trace_path, text)?;
    }

    // Round trip: the matrix as written must reproduce c and d.
    let gamma = CovarianceMatrix::with_tolerances(written.clone(), &tol)
        .map_err(|e| Failure::Internal(format!("synthesized matrix rejected: {e}")))?;
    let got_c = local_diagonal(&gamma)?;
    let got_d = symplectic_eigenvalues(&gamma, &tol)?;
    let c_error = input::max_diff(got_c.values.values(), &c);
    let d_error = input::max_diff(got_d.values(), &d);
    let scale = c[c.len() - 1].max(d[d.len() - 1]).max(1.0);
    let limit = tol.recon * scale;

    let rows: Vec<Vec<String>> = (0..c.len())
        .map(|k| {
            vec![
                (k + 1).to_string(),
                fmt(c[k]),
                fmt(got_c.values.values()[k]),
                fmt(d[k]),
                fmt(got_d.values()[k]),
            ]
        })
        .collect();
    table(&["mode", "c", "c_built", "d", "d_built"], &rows);

    let mut details = json!({
        "c": c,
        "c_permutation": cp,
        "d": d,
        "d_permutation": dp,
        "steps": trace.steps.len(),
        "local_error": c_error,
        "spectrum_error": d_error,
        "verification_limit": limit,
    });
    match &args.out {
        Some(path) => details["out"] = json!(path.display().to_string()),
        None => details["matrix"] = json!(input::rows(&written)),
    }
    if !(c_error <= limit && d_error <= limit) {
        return Err(Failure::Internal(format!(
            "round trip failed: local error {c_error:e}, spectrum error {d_error:e}, limit {limit:e}"
        )));
    }
    eprintln!("verdict: synthesized, round trip within {limit:e}");
    Ok(Outcome::ok(rec.finish("synthesized", Some(verdict.slacks), details)))
}
