//! Thermal entropy function `s(c)` in bits, entanglement profiles of pure
//! states, and the local-data upper bound on global entropy.

use serde::Serialize;

use crate::marginal::{check_pure, local_diagonal, FeasibilityVerdict};
use crate::symplectic::{symplectic_eigenvalues, CovarianceMatrix};
use crate::{Error, Result, Tolerances};

/// `s(c) = ((c+1)/2) log2((c+1)/2) - ((c-1)/2) log2((c-1)/2)`.
///
/// Values in `[1 - tol.psd, 1)` are clamped to 1.
pub fn entropy_s(c: f64, tol: &Tolerances) -> Result<f64> {
    if !(c >= 1.0 - tol.psd) || !c.is_finite() {
        return Err(Error::BelowOne { value: c });
    }
    let c = c.max(1.0);
    let plus = 0.5 * (c + 1.0);
    let minus = 0.5 * (c - 1.0);
    let tail = if c - 1.0 <= 1e-300 { 0.0 } else { minus * minus.log2() };
    Ok(plus * plus.log2() - tail)
}

/// Inverse of [`entropy_s`] by bisection, to `1e-12` absolute in `c`.
pub fn entropy_s_inverse(value: f64, tol: &Tolerances) -> Result<f64> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(Error::InversionFailure { value });
    }
    if value == 0.0 {
        return Ok(1.0);
    }
    let s = |c: f64| entropy_s(c, tol).expect("bracket stays above one");
    let mut lo = 1.0;
    let mut hi = 2.0;
    while s(hi) < value {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::InversionFailure { value });
        }
    }
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if s(mid) < value {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `s(c_j)` for each mode of a pure state: the entanglement entropy between
/// mode `j` and the rest.
pub fn entanglement_profile(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<Vec<f64>> {
    let d = symplectic_eigenvalues(gamma, tol)?;
    let worst = d.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    if worst > tol.psd {
        return Err(Error::NotPure { value: worst });
    }
    local_diagonal(gamma)?
        .unsorted
        .iter()
        .map(|&c| entropy_s(c, tol))
        .collect()
}

/// Whether local entanglement entropies `e` can come from a pure Gaussian
/// state: inverts `s` and applies [`check_pure`] to `c - 1`.
pub fn sharing_feasible(e: &[f64], tol: &Tolerances) -> Result<FeasibilityVerdict> {
    let mut b = Vec::with_capacity(e.len());
    for (index, &value) in e.iter().enumerate() {
        if !(value >= 0.0) {
            return Err(Error::NegativeEntry { index, value });
        }
        b.push(entropy_s_inverse(value, tol)? - 1.0);
    }
    check_pure(&b, tol)
}

/// `s(c_1 + ... + c_n)`.
///
/// Not a valid bound for every state with these locals: a product of thermal
/// modes with `c = (1.5, 1.5, 2)` has entropy `2 s(1.5) + s(2) > s(5)`.
pub fn entropy_upper_bound(c: &[f64], tol: &Tolerances) -> Result<f64> {
    if c.is_empty() {
        return Err(Error::Empty);
    }
    for &v in c {
        if !(v >= 1.0 - tol.psd) {
            return Err(Error::BelowOne { value: v });
        }
    }
    entropy_s(c.iter().sum(), tol)
}

/// Von Neumann entropy of the Gaussian state, `sum_j s(d_j)`.
pub fn gaussian_entropy(gamma: &CovarianceMatrix, tol: &Tolerances) -> Result<f64> {
    symplectic_eigenvalues(gamma, tol)?
        .values()
        .iter()
        .map(|&d| entropy_s(d, tol))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub per_mode_entropies: Vec<f64>,
    pub total_local_sum: f64,
    pub global_upper_bound: f64,
    /// The locals satisfy the pure-state cone, so a globally pure state with
    /// these marginals exists.
    pub purity_consistent: bool,
}

impl EntropyReport {
    pub fn from_locals(c: &[f64], tol: &Tolerances) -> Result<Self> {
        let global_upper_bound = entropy_upper_bound(c, tol)?;
        let per_mode_entropies = c.iter().map(|&v| entropy_s(v, tol)).collect::<Result<Vec<_>>>()?;
        let b: Vec<f64> = c.iter().map(|&v| (v - 1.0).max(0.0)).collect();
        Ok(Self {
            total_local_sum: per_mode_entropies.iter().sum(),
            per_mode_entropies,
            global_upper_bound,
            purity_consistent: check_pure(&b, tol)?.feasible,
        })
    }
}
