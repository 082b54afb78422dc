use std::path::PathBuf;

use gqmp_core::{
    check_mixed, check_pure, circuit_from_covariance, circuit_from_mixed, parse_circuit, synthesize,
    synthesize_pure, write_circuit, CircuitSource, Tolerances,
};
use nalgebra::DMatrix;
use serde_json::json;

use super::Outcome;
use crate::failure::Failure;
use crate::input::{self, fmt, Vector};
use crate::report::{table, Recorder};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Covariance matrix file of the target state.
    #[arg(long, conflicts_with_all = ["c", "pure"])]
    matrix: Option<PathBuf>,
    /// Local symplectic diagonal of the target, comma-separated.
    #[arg(long, allow_hyphen_values = true, requires = "d", conflicts_with = "pure")]
    c: Option<Vector>,
    /// Symplectic spectrum of the target, comma-separated, every entry >= 1.
    #[arg(long, allow_hyphen_values = true, requires = "c")]
    d: Option<Vector>,
    /// Pure target with local excesses --b.
    #[arg(long, requires = "b")]
    pure: bool,
    /// Local excesses c - 1 of a pure target.
    #[arg(long, allow_hyphen_values = true, requires = "pure")]
    b: Option<Vector>,
    /// Output circuit file. Without it the circuit text is embedded in the report.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run(args: &Args, tol: Tolerances) -> Result<Outcome, Failure> {
    let mut rec = Recorder::new("prepare", tol);
    let mut details = json!({});
    let (circuit, target): (_, DMatrix<f64>) = if let Some(path) = &args.matrix {
        let (gamma, text) = input::read_covariance(path, &tol)?;
        rec.input("matrix", text.as_bytes());
        gamma.require_physical(&tol)?;
        (circuit_from_covariance(&gamma, &tol)?, gamma.into_matrix())
    } else if args.pure {
        let b = &args.b.as_ref().expect("clap enforces --b").0;
        rec.vector("b", b);
        let verdict = check_pure(b, &tol)?;
        if !verdict.feasible {
            eprintln!("verdict: infeasible");
            return Ok(Outcome {
                record: rec.finish("infeasible", Some(verdict.slacks), json!({ "b": b })),
                code: 1,
            });
        }
        let (bs, bp) = input::sorted(b);
        details["b_permutation"] = json!(bp);
        let trace = synthesize_pure(&bs, &tol)?;
        let gamma = trace.final_matrix;
        (circuit_from_covariance(&gamma, &tol)?, gamma.into_matrix())
    } else {
        let (Some(c), Some(d)) = (&args.c, &args.d) else {
            return Err(Failure::input("give --matrix, --c and --d, or --pure --b"));
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
        details["c_permutation"] = json!(cp);
        details["d_permutation"] = json!(dp);
        if ds[0] < 1.0 - tol.psd {
            return Err(Failure::Input(format!(
                "symplectic eigenvalue {} is below 1, not a physical state",
                ds[0]
            )));
        }
        let verdict = check_mixed(&cs, &ds, &tol)?;
        if !verdict.feasible {
            eprintln!("verdict: infeasible (worst slack {})", fmt(verdict.min_slack()));
            details["c"] = json!(cs);
            details["d"] = json!(ds);
            return Ok(Outcome {
                record: rec.finish("infeasible", Some(verdict.slacks), details),
                code: 1,
            });
        }
        let trace = synthesize(&cs, &ds, &tol)?;
        let circuit = circuit_from_mixed(&trace, &tol)?;
        (circuit, trace.final_matrix.into_matrix())
    };

    let text = write_circuit(&circuit);
    if let Some(path) = &args.out {
        std::fs::write(path, &text)?;
        details["out"] = json!(path.display().to_string());
    } else {
        details["circuit"] = json!(text);
    }
    // Replay what was serialized, not the in-memory circuit.
    let replayed = parse_circuit(&text).map_err(|e| Failure::Internal(format!("emitted circuit unreadable: {e}")))?;
    let defect = replayed.reconstruction_defect(&target);
    if !(defect <= tol.recon) {
        return Err(Failure::Internal(format!(
            "circuit replay defect {defect:e} exceeds {:e}",
            tol.recon
        )));
    }

    let rows: Vec<Vec<String>> = replayed
        .active_squeezers()
        .map(|s| vec![(s.mode + 1).to_string(), fmt(s.z), format!("{:?}", s.quadrature)])
        .collect();
    table(&["mode", "z", "quadrature"], &rows);
    eprintln!(
        "passive elements: {}, replay defect {defect:e}",
        replayed.passive_element_count()
    );

    details["n"] = json!(replayed.n);
    details["source"] = json!(match replayed.source {
        CircuitSource::PureOpo => "pure_opo",
        CircuitSource::MixedOqv => "mixed_oqv",
    });
    details["active_squeezers"] = json!(replayed.active_squeezers().count());
    details["passive_elements"] = json!(replayed.passive_element_count());
    details["replay_defect"] = json!(defect);
    Ok(Outcome::ok(rec.finish("ok", None, details)))
}
