use std::path::Path;
use std::str::FromStr;

use gqmp_core::{CovarianceMatrix, SymplecticTransform, Tolerances};
use nalgebra::DMatrix;

use crate::failure::Failure;
use crate::matfile::{MatrixFile, MatrixKind};
use crate::report::TOL_ENV;

/// Comma-separated decimals from the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(pub Vec<f64>);

impl FromStr for Vector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .enumerate()
            .map(|(k, t)| {
                let t = t.trim();
                match t.parse::<f64>() {
                    Ok(v) if v.is_finite() => Ok(v),
                    _ => Err(format!("entry {} (`{t}`) is not a finite decimal", k + 1)),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Vector(values))
    }
}

/// Sorted copy plus `perm`, where `sorted[k] = values[perm[k]]`.
pub fn sorted(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut perm: Vec<usize> = (0..values.len()).collect();
    perm.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    (perm.iter().map(|&k| values[k]).collect(), perm)
}

/// Flag beats environment beats default.
pub fn tolerances(flag: Option<f64>) -> Result<Tolerances, Failure> {
    let tol = Tolerances::default();
    let ineq = match flag {
        Some(v) => v,
        None => match std::env::var(TOL_ENV) {
            Ok(text) => text
                .trim()
                .parse::<f64>()
                .map_err(|_| Failure::Input(format!("{TOL_ENV}=`{text}` is not a decimal")))?,
            Err(_) => return Ok(tol),
        },
    };
    if !(ineq >= 0.0) || !ineq.is_finite() {
        return Err(Failure::Input(format!("tolerance must be finite and non-negative, got {ineq}")));
    }
    Ok(tol.with_ineq(ineq))
}

pub fn read_matrix(path: &Path, expected: MatrixKind) -> Result<(MatrixFile, String), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let file = MatrixFile::parse(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if file.kind != expected {
        return Err(Failure::Input(format!(
            "{}: expected kind {}, found {}",
            path.display(),
            expected.as_str(),
            file.kind.as_str()
        )));
    }
    Ok((file, text))
}

pub fn read_covariance(path: &Path, tol: &Tolerances) -> Result<(CovarianceMatrix, String), Failure> {
    let (file, text) = read_matrix(path, MatrixKind::Covariance)?;
    let gamma = CovarianceMatrix::with_tolerances(file.matrix, tol)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((gamma, text))
}

pub fn read_symplectic(path: &Path, tol: &Tolerances) -> Result<(SymplecticTransform, String), Failure> {
    let (file, text) = read_matrix(path, MatrixKind::Symplectic)?;
    let s = SymplecticTransform::with_tolerances(file.matrix, tol)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok((s, text))
}

/// Writes the file and parses it back so callers verify what is on disk.
pub fn write_matrix(path: &Path, kind: MatrixKind, matrix: &DMatrix<f64>) -> Result<DMatrix<f64>, Failure> {
    let text = MatrixFile::new(kind, matrix.clone()).to_text();
    std::fs::write(path, &text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    let back = MatrixFile::parse(&text).map_err(|e| Failure::Internal(format!("re-reading {}: {e}", path.display())))?;
    Ok(back.matrix)
}

pub fn rows(matrix: &DMatrix<f64>) -> Vec<Vec<f64>> {
    matrix.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs()))
}

pub fn fmt(v: f64) -> String {
    format!("{v:.10}")
}

/// `path` with `suffix` appended to the file name.
pub fn with_suffix(path: &Path, suffix: &str) -> std::path::PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(suffix);
    name.into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_vectors() {
        assert_eq!("1.5, 2,-3e1".parse::<Vector>().unwrap(), Vector(vec![1.5, 2.0, -30.0]));
        assert!("1,,2".parse::<Vector>().is_err());
        assert!("1,nan".parse::<Vector>().is_err());
    }

    #[test]
    fn sorting_echoes_permutation() {
        let (s, p) = sorted(&[3.0, 1.0, 2.0]);
        assert_eq!(s, vec![1.0, 2.0, 3.0]);
        assert_eq!(p, vec![1, 2, 0]);
    }
}
