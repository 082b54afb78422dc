use std::path::PathBuf;

use gqmp_core::{check_mixed, check_pure, local_diagonal, symplectic_eigenvalues, FeasibilityVerdict, Tolerances};
use serde_json::json;

use super::Outcome;
use crate::failure::Failure;
use crate::input::{self, fmt, Vector};
use crate::report::{table, Recorder};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Local symplectic diagonal, comma-separated.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["matrix", "pure"])]
    c: Option<Vector>,
    /// Symplectic spectrum, comma-separated.
    #[arg(long, allow_hyphen_values = true, requires = "c")]
    d: Option<Vector>,
    /// Pure-state mode: test the local excesses given by --b.
    #[arg(long, requires = "b")]
    pure: bool,
    /// Local excesses c - 1 of a pure state.
    #[arg(long, allow_hyphen_values = true, requires = "pure")]
    b: Option<Vector>,
    /// Covariance matrix file; its own c and d are tested.
    #[arg(long, conflicts_with = "pure")]
    matrix: Option<PathBuf>,
}

fn print_slacks(verdict: &FeasibilityVerdict) {
    let rows: Vec<Vec<String>> = verdict
        .slacks
        .iter()
        .map(|s| {
            let status = if s.slack >= -verdict.tolerance { "ok" } else { "VIOLATED" };
            vec![format!("{:?}", s.constraint), fmt(s.slack), status.to_string()]
        })
        .collect();
    table(&["constraint", "slack", "status"], &rows);
}

pub fn run(args: &Args, tol: Tolerances) -> Result<Outcome, Failure> {
    let mut rec = Recorder::new("check", tol);
    let (verdict, details) = if let Some(path) = &args.matrix {
        let (gamma, text) = input::read_covariance(path, &tol)?;
        rec.input("matrix", text.as_bytes());
        let locals = local_diagonal(&gamma)?;
        let spectrum = symplectic_eigenvalues(&gamma, &tol)?;
        let verdict = check_mixed(locals.values.values(), spectrum.values(), &tol)?;
        let details = json!({
            "mode": "matrix",
            "n": gamma.n(),
            "c": locals.values.values(),
            "c_permutation": locals.permutation,
            "d": spectrum.values(),
            "physical": gamma.is_physical(&tol),
        });
        (verdict, details)
    } else if args.pure {
        let b = &args.b.as_ref().expect("clap enforces --b").0;
        rec.vector("b", b);
        let verdict = check_pure(b, &tol)?;
        (verdict, json!({ "mode": "pure", "b": b }))
    } else {
        let (Some(c), Some(d)) = (&args.c, &args.d) else {
            return Err(Failure::input("give --c and --d, --pure --b, or --matrix"));
        };
        if c.0.len() != d.0.len() {
            return Err(Failure::Input(format!(
                "--c has {} entries but --d has {}",
                c.0.len(),
                d.0.len()
            )));
        }
        let (cs, cp) = input::sorted(&c.0);
        let (ds, dp) = input::sorted(&d.0);
        rec.vector("c", &cs);
        rec.vector("d", &ds);
        let verdict = check_mixed(&cs, &ds, &tol)?;
        let details = json!({
            "mode": "vectors",
            "c": cs,
            "c_permutation": cp,
            "d": ds,
            "d_permutation": dp,
        });
        (verdict, details)
    };
    print_slacks(&verdict);
    let (label, code) = if verdict.feasible { ("feasible", 0) } else { ("infeasible", 1) };
    eprintln!("verdict: {label}");
    Ok(Outcome {
        record: rec.finish(label, Some(verdict.slacks), details),
        code,
    })
}
