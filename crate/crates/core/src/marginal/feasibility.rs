use serde::{Deserialize, Serialize};

use super::local::local_diagonal;
use crate::symplectic::spectrum::validate_sorted_positive;
use crate::symplectic::{symplectic_eigenvalues, CovarianceMatrix};
use crate::{Error, Result, Tolerances};

/// Identifies one inequality of the feasibility test. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Constraint {
    /// `sum_{j<=k} c_j >= sum_{j<=k} d_j`.
    PartialSum(usize),
    /// `c_n - sum_{j<n} c_j <= d_n - sum_{j<n} d_j`.
    LastCondition,
    /// `b_j <= sum_{k != j} b_k` for the mode `j` (input order) with the
    /// largest `b_j`.
    PureCone(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSlack {
    pub constraint: Constraint,
    /// Negative means violated.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub slacks: Vec<ConstraintSlack>,
    pub tolerance: f64,
}

impl FeasibilityVerdict {
    fn from_slacks(slacks: Vec<ConstraintSlack>, tolerance: f64) -> Self {
        let feasible = slacks.iter().all(|s| s.slack >= -tolerance);
        Self {
            feasible,
            slacks,
            tolerance,
        }
    }

    pub fn violated(&self) -> impl Iterator<Item = &ConstraintSlack> {
        self.slacks.iter().filter(move |s| s.slack < -self.tolerance)
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks
            .iter()
            .map(|s| s.slack)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn slack(&self, constraint: Constraint) -> Option<f64> {
        self.slacks
            .iter()
            .find(|s| s.constraint == constraint)
            .map(|s| s.slack)
    }
}

/// The `n + 1` inequalities relating local diagonal `c` and symplectic
/// spectrum `d`, both sorted non-decreasing and strictly positive.
pub fn check_mixed(c: &[f64], d: &[f64], tol: &Tolerances) -> Result<FeasibilityVerdict> {
    if c.len() != d.len() {
        return Err(Error::LengthMismatch {
            left: c.len(),
            right: d.len(),
        });
    }
    validate_sorted_positive(c)?;
    validate_sorted_positive(d)?;
    let n = c.len();

    let mut slacks = Vec::with_capacity(n + 1);
    let mut running = 0.0;
    for k in 0..n {
        running += c[k] - d[k];
        slacks.push(ConstraintSlack {
            constraint: Constraint::PartialSum(k + 1),
            slack: running,
        });
    }
    // (d_n - sum_{j<n} d_j) - (c_n - sum_{j<n} c_j)
    let head: f64 = c[..n - 1].iter().zip(&d[..n - 1]).map(|(a, b)| a - b).sum();
    slacks.push(ConstraintSlack {
        constraint: Constraint::LastCondition,
        slack: (d[n - 1] - c[n - 1]) + head,
    });
    Ok(FeasibilityVerdict::from_slacks(slacks, tol.ineq))
}

/// Pure-state cone `b_j <= sum_{k != j} b_k`; only the largest `b_j` can
/// bind, so the verdict carries that single constraint.
pub fn check_pure(b: &[f64], tol: &Tolerances) -> Result<FeasibilityVerdict> {
    if b.is_empty() {
        return Err(Error::Empty);
    }
    for (index, &value) in b.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeEntry { index, value });
        }
    }
    let (j, &max) = b
        .iter()
        .enumerate()
        .fold((0, &b[0]), |best, cur| if cur.1 > best.1 { cur } else { best });
    let rest: f64 = b
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != j)
        .map(|(_, v)| v)
        .sum();
    Ok(FeasibilityVerdict::from_slacks(
        vec![ConstraintSlack {
            constraint: Constraint::PureCone(j + 1),
            slack: rest - max,
        }],
        tol.ineq,
    ))
}

/// Runs [`check_mixed`] on the matrix's own local diagonal and spectrum.
/// Always feasible for a valid matrix; a violation signals corrupted data.
pub fn check_matrix_consistency(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<FeasibilityVerdict> {
    let c = local_diagonal(gamma)?;
    let d = symplectic_eigenvalues(gamma, tol)?;
    check_mixed(c.values.values(), d.values(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn two_mode_example_slacks() {
        let v = check_mixed(&[1.5, 1.5], &[1.0, 2.0], &tol()).unwrap();
        assert!(v.feasible);
        let s: Vec<f64> = v.slacks.iter().map(|s| s.slack).collect();
        assert_eq!(s, vec![0.5, 0.0, 1.0]);
    }

    #[test]
    fn identity_case_is_tight() {
        let c = [1.0, 2.0, 2.5, 7.0];
        let v = check_mixed(&c, &c, &tol()).unwrap();
        assert!(v.feasible);
        for k in 1..=4 {
            assert_eq!(v.slack(Constraint::PartialSum(k)), Some(0.0));
        }
    }

    #[test]
    fn last_condition_violation() {
        let v = check_mixed(&[1.0, 1.0, 5.0], &[1.0, 1.0, 1.0], &tol()).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.slack(Constraint::LastCondition), Some(-4.0));
        let violated: Vec<_> = v.violated().map(|s| s.constraint).collect();
        assert_eq!(violated, vec![Constraint::LastCondition]);
    }

    #[test]
    fn input_errors() {
        assert!(matches!(
            check_mixed(&[1.0], &[1.0, 2.0], &tol()),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            check_mixed(&[2.0, 1.0], &[1.0, 2.0], &tol()),
            Err(Error::NotSorted { .. })
        ));
        assert!(matches!(
            check_mixed(&[-1.0, 1.0], &[1.0, 2.0], &tol()),
            Err(Error::NonPositive { .. })
        ));
        assert!(matches!(
            check_pure(&[1.0, -0.5], &tol()),
            Err(Error::NegativeEntry { index: 1, .. })
        ));
    }

    #[test]
    fn pure_cone_examples() {
        assert!(check_pure(&[0.0, 0.0, 0.0], &tol()).unwrap().feasible);
        let v = check_pure(&[1.0, 1.0, 3.0], &tol()).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.slacks[0].constraint, Constraint::PureCone(3));
        assert_eq!(v.slacks[0].slack, -1.0);
        let v = check_pure(&[1.0, 1.0, 2.0], &tol()).unwrap();
        assert!(v.feasible);
        assert_eq!(v.slacks[0].slack, 0.0);
    }

    #[test]
    fn single_mode_requires_equality() {
        assert!(check_mixed(&[2.0], &[2.0], &tol()).unwrap().feasible);
        assert!(!check_mixed(&[2.5], &[2.0], &tol()).unwrap().feasible);
        assert!(!check_pure(&[0.5], &tol()).unwrap().feasible);
    }

    #[test]
    fn williamson_form_is_consistent_and_tight() {
        let g = CovarianceMatrix::williamson_form(&[1.0, 2.0, 3.0]).unwrap();
        let v = check_matrix_consistency(&g, &tol()).unwrap();
        assert!(v.feasible);
        for k in 1..=3 {
            assert!(v.slack(Constraint::PartialSum(k)).unwrap().abs() < 1e-13);
        }
    }
}
