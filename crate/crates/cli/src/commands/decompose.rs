use std::path::PathBuf;

use gqmp_core::{euler_decompose, williamson as normal_form, Tolerances};
use nalgebra::DMatrix;
use serde_json::{json, Value};

use super::Outcome;
use crate::failure::Failure;
use crate::input::{self, fmt};
use crate::matfile::MatrixKind;
use crate::report::{table, Recorder};

#[derive(Debug, clap::Args)]
pub struct WilliamsonArgs {
    /// Covariance matrix file.
    #[arg(long)]
    matrix: PathBuf,
    /// Output prefix; writes `<prefix>.S.mat` and `<prefix>.D.mat`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EulerArgs {
    /// Symplectic matrix file.
    #[arg(long)]
    matrix: PathBuf,
    /// Output prefix; writes `<prefix>.O.mat`, `<prefix>.Q.mat` and `<prefix>.V.mat`.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Writes each factor under the prefix, or embeds it in `details`.
fn emit_factors(
    prefix: Option<&PathBuf>,
    factors: &[(&str, MatrixKind, &DMatrix<f64>)],
    details: &mut Value,
) -> Result<(), Failure> {
    let mut files = serde_json::Map::new();
    for (name, kind, matrix) in factors {
        match prefix {
            Some(prefix) => {
                let path = input::with_suffix(prefix, &format!(".{name}.mat"));
                let back = input::write_matrix(&path, *kind, matrix)?;
                if &back != *matrix {
                    return Err(Failure::Internal(format!("{} did not round trip", path.display())));
                }
                files.insert(name.to_string(), json!(path.display().to_string()));
            }
            None => {
                files.insert(name.to_string(), json!(input::rows(matrix)));
            }
        }
    }
    details[if prefix.is_some() { "files" } else { "factors" }] = Value::Object(files);
    Ok(())
}

pub fn williamson(args: &WilliamsonArgs, tol: Tolerances) -> Result<Outcome, Failure> {
    let mut rec = Recorder::new("williamson", tol);
    let (gamma, text) = input::read_covariance(&args.matrix, &tol)?;
    rec.input("matrix", text.as_bytes());
    let w = normal_form(&gamma, &tol)?;
    let diagonal = w.diagonal();
    let defect = w.defect(&gamma);
    let symplectic_defect = w.transform.defect();
    let limit = tol.recon * input::max_abs(gamma.matrix()).max(1.0);

    let rows: Vec<Vec<String>> = w
        .spectrum
        .values()
        .iter()
        .enumerate()
        .map(|(k, d)| vec![(k + 1).to_string(), fmt(*d)])
        .collect();
    table(&["mode", "d"], &rows);
    eprintln!("defect |S gamma S^T - D| = {defect:e}, symplectic defect = {symplectic_defect:e}");

    let mut details = json!({
        "n": gamma.n(),
        "spectrum": w.spectrum.values(),
        "physical": gamma.is_physical(&tol),
        "reconstruction_defect": defect,
        "symplectic_defect": symplectic_defect,
        "verification_limit": limit,
    });
    if !(defect <= limit && symplectic_defect <= tol.sympl) {
        return Err(Failure::Internal(format!(
            "normal form defect {defect:e} (symplectic {symplectic_defect:e}) exceeds tolerance"
        )));
    }
    emit_factors(
        args.out.as_ref(),
        &[
            ("S", MatrixKind::Symplectic, w.transform.matrix()),
            ("D", MatrixKind::Covariance, &diagonal),
        ],
        &mut details,
    )?;
    Ok(Outcome::ok(rec.finish("ok", None, details)))
}

pub fn euler(args: &EulerArgs, tol: Tolerances) -> Result<Outcome, Failure> {
    let mut rec = Recorder::new("euler", tol);
    let (s, text) = input::read_symplectic(&args.matrix, &tol)?;
    rec.input("matrix", text.as_bytes());
    let f = euler_decompose(&s, &tol)?;
    let q = f.q_matrix();
    let defect = f.reconstruction_defect(s.matrix());
    let passive_defect = f.passive_defect();
    // Rounding in S = OQV grows with the squared norm of S.
    let limit = tol.recon * input::max_abs(s.matrix()).max(1.0).powi(2);

    let rows: Vec<Vec<String>> = f
        .z
        .iter()
        .enumerate()
        .map(|(k, z)| vec![(k + 1).to_string(), fmt(*z)])
        .collect();
    table(&["mode", "z"], &rows);
    eprintln!("defect |OQV - S| = {defect:e}, passive defect = {passive_defect:e}");

    let mut details = json!({
        "n": s.n(),
        "z": f.z,
        "reconstruction_defect": defect,
        "passive_defect": passive_defect,
        "verification_limit": limit,
    });
    if !(defect <= limit && passive_defect <= tol.sympl.max(1e-9)) {
        return Err(Failure::Internal(format!(
            "Euler factors off by {defect:e} (passive defect {passive_defect:e})"
        )));
    }
    emit_factors(
        args.out.as_ref(),
        &[
            ("O", MatrixKind::Symplectic, f.o.matrix()),
            ("Q", MatrixKind::Symplectic, &q),
            ("V", MatrixKind::Symplectic, f.v.matrix()),
        ],
        &mut details,
    )?;
    Ok(Outcome::ok(rec.finish("ok", None, details)))
}
