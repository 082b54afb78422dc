use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Tolerances};

/// `[[c1,0,e,0],[0,c1,0,f],[e,0,c2,0],[0,f,0,c2]]` with symplectic spectrum
/// `(d1, d2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeBlock {
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
    pub e: f64,
    pub f: f64,
}

impl TwoModeBlock {
    pub fn matrix(&self) -> DMatrix<f64> {
        block_matrix(self.c1, self.c2, self.e, self.f)
    }

    /// Same block with the two modes exchanged; `(e, f)` are unchanged.
    pub fn swapped(&self) -> Self {
        Self {
            c1: self.c2,
            c2: self.c1,
            ..*self
        }
    }
}

fn block_matrix(c1: f64, c2: f64, e: f64, f: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            c1, 0.0, e, 0.0, //
            0.0, c1, 0.0, f, //
            e, 0.0, c2, 0.0, //
            0.0, f, 0.0, c2,
        ],
    )
}

// The block splits into x and p parts [[c1, e], [e, c2]] and [[c1, f], [f, c2]].
fn min_block_eigenvalue(c1: f64, c2: f64, e: f64, f: f64) -> f64 {
    let mean = 0.5 * (c1 + c2);
    let half = 0.5 * (c1 - c2);
    mean - half.hypot(e.abs().max(f.abs()))
}

/// Symplectic eigenvalues of the assembled block from the radical formula
///
/// `d^2 = (c1^2 + c2^2 + 2ef +- sqrt(R)) / 2`,
/// `R = c1^4 + c2^4 + 4ef c2^2 - 2c1^2(c2^2 - 2ef) + 4c1c2(e^2 + f^2)`.
///
/// `R` is evaluated in the equivalent factored form
/// `(c1^2 - c2^2)^2 + 4(c1 e + c2 f)(c2 e + c1 f)`, which stays accurate when
/// the two eigenvalues nearly coincide. The `-` root is recovered from the
/// product of the roots, `(c1c2 - e^2)(c1c2 - f^2)`, which is free of
/// cancellation.
pub fn two_mode_eigenvalues_closed_form(c1: f64, c2: f64, e: f64, f: f64) -> Result<(f64, f64)> {
    let min_eigenvalue = min_block_eigenvalue(c1, c2, e, f);
    if !(c1 > 0.0 && c2 > 0.0 && min_eigenvalue > 0.0) {
        return Err(Error::NotPositive { min_eigenvalue });
    }
    let delta = c1 * c1 + c2 * c2 + 2.0 * e * f;
    let rad = ((c1 - c2) * (c1 + c2)).powi(2) + 4.0 * (c1 * e + c2 * f) * (c2 * e + c1 * f);
    let big = 0.5 * (delta + rad.max(0.0).sqrt());
    let det = (c1 * c2 - e * e) * (c1 * c2 - f * f);
    let small = det / big;
    Ok((small.sqrt(), big.sqrt()))
}

/// Couplings `(e, f)` realizing spectrum `(d1, d2)` on locals `(c1, c2)`.
///
/// Solves `ef = p` and `e^2 + f^2 = q` with
/// `p = (d1^2 + d2^2 - c1^2 - c2^2) / 2`,
/// `q = ((c1c2)^2 + p^2 - (d1d2)^2) / (c1c2)`, taking `e >= 0` and
/// `sign f = sign p`.
///
/// The discriminant `(e^2 - f^2)^2 = q^2 - 4p^2` vanishes for every
/// symmetric pure pair, so it is evaluated in the factored form
/// `s_sum s_diff (c1+c2+d1+d2)(d2-d1+c2-c1)((d1+d2)^2-(c2-c1)^2)((c1+c2)^2-(d2-d1)^2) / (16 (c1c2)^2)`
/// where `s_sum` and `s_diff` are the two inequality slacks. `f` is then
/// taken as `p / e`.
pub fn solve_two_mode(c1: f64, c2: f64, d1: f64, d2: f64, tol: &Tolerances) -> Result<TwoModeBlock> {
    for (index, value) in [c1, c2, d1, d2].into_iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { index, value });
        }
    }
    if c2 < c1 {
        return Err(Error::NotSorted { index: 1 });
    }
    if d2 < d1 {
        return Err(Error::NotSorted { index: 3 });
    }
    let sum_slack = (c1 - d1) + (c2 - d2);
    let diff_slack = (d2 - d1) - (c2 - c1);
    if sum_slack < -tol.ineq || diff_slack < -tol.ineq {
        return Err(Error::InfeasiblePair { c1, c2, d1, d2 });
    }

    let cc = c1 * c2;
    let p = 0.5 * ((d1 - c1) * (d1 + c1) + (d2 - c2) * (d2 + c2));
    let q = (cc * cc + p * p - (d1 * d2).powi(2)) / cc;
    let scale = (c2 + d2).powi(2);
    if q < -tol.ineq * scale {
        return Err(Error::NumericalFailure(format!(
            "negative coupling norm {q:e} in two-mode solve"
        )));
    }
    let disc2 = sum_slack.max(0.0)
        * diff_slack.max(0.0)
        * (c1 + c2 + d1 + d2)
        * ((d2 - d1) + (c2 - c1))
        * ((d1 + d2).powi(2) - (c2 - c1).powi(2)).max(0.0)
        * ((c1 + c2).powi(2) - (d2 - d1).powi(2)).max(0.0)
        / (16.0 * cc * cc);
    let disc = disc2.sqrt();
    let e = (0.5 * (q.max(0.0) + disc)).sqrt();
    let f = if e > 0.0 { p / e } else { 0.0 };
    Ok(TwoModeBlock { c1, c2, d1, d2, e, f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{symplectic_eigenvalues, CovarianceMatrix};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn eigensolver(c1: f64, c2: f64, e: f64, f: f64) -> Vec<f64> {
        let g = CovarianceMatrix::new(block_matrix(c1, c2, e, f)).unwrap();
        symplectic_eigenvalues(&g, &tol()).unwrap().into_values()
    }

    #[test]
    fn uncoupled_gives_locals() {
        assert_eq!(two_mode_eigenvalues_closed_form(3.0, 1.5, 0.0, 0.0).unwrap(), (1.5, 3.0));
    }

    #[test]
    fn two_mode_squeezed_values() {
        let r = 3.0_f64.sqrt();
        let (d1, d2) = two_mode_eigenvalues_closed_form(2.0, 2.0, r, -r).unwrap();
        assert!((d1 - 1.0).abs() < 1e-12 && (d2 - 1.0).abs() < 1e-12);
        let b = solve_two_mode(2.0, 2.0, 1.0, 1.0, &tol()).unwrap();
        assert!((b.e - r).abs() < 1e-14 && (b.f + r).abs() < 1e-14);
    }

    #[test]
    fn equal_inputs_give_zero_couplings() {
        let b = solve_two_mode(1.3, 2.7, 1.3, 2.7, &tol()).unwrap();
        assert_eq!((b.e, b.f), (0.0, 0.0));
    }

    #[test]
    fn mixed_example_solves_both_equations() {
        let b = solve_two_mode(1.5, 1.5, 1.0, 2.0, &tol()).unwrap();
        assert!((b.e * b.f - 0.25).abs() < 1e-14);
        let q = ((2.25_f64).powi(2) + 1.0 / 16.0 - 4.0) / 2.25;
        assert!((b.e * b.e + b.f * b.f - q).abs() < 1e-14);
        let d = eigensolver(1.5, 1.5, b.e, b.f);
        assert!((d[0] - 1.0).abs() < 1e-10 && (d[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn difference_boundary_with_nonzero_couplings() {
        // c2 - c1 = d2 - d1 but the couplings do not vanish.
        let b = solve_two_mode(2.0, 3.0, 1.0, 2.0, &tol()).unwrap();
        assert!((b.e - 2.0).abs() < 1e-12 && (b.f + 2.0).abs() < 1e-12);
        let d = eigensolver(2.0, 3.0, b.e, b.f);
        assert!((d[0] - 1.0).abs() < 1e-10 && (d[1] - 2.0).abs() < 1e-10);
    }

    #[test]
    fn closed_form_matches_eigensolver() {
        let cases = [(1.0, 2.0, 0.3, -0.7), (4.0, 4.0, 3.9, 0.1), (1.2, 5.0, -2.0, 2.0), (2.0, 2.0, 1.9, -1.9)];
        for (c1, c2, e, f) in cases {
            let (d1, d2) = two_mode_eigenvalues_closed_form(c1, c2, e, f).unwrap();
            let d = eigensolver(c1, c2, e, f);
            assert!((d1 - d[0]).abs() < 1e-10 && (d2 - d[1]).abs() < 1e-10, "{c1} {c2} {e} {f} {d1} {d2} {d:?}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            two_mode_eigenvalues_closed_form(1.0, 1.0, 1.0, 0.0),
            Err(Error::NotPositive { .. })
        ));
        assert!(matches!(
            solve_two_mode(1.0, 5.0, 1.0, 1.0, &tol()),
            Err(Error::InfeasiblePair { .. })
        ));
        assert!(matches!(
            solve_two_mode(1.0, 1.0, 2.0, 2.0, &tol()),
            Err(Error::InfeasiblePair { .. })
        ));
        assert!(matches!(
            solve_two_mode(2.0, 1.0, 1.0, 1.0, &tol()),
            Err(Error::NotSorted { .. })
        ));
    }
}
