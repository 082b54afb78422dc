use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every operation.
///
/// `sym` and `sympl` are relative to the max-norm of the matrix under test;
/// the rest are absolute.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub sym: f64,
    pub sympl: f64,
    pub pos: f64,
    pub psd: f64,
    pub recon: f64,
    pub ineq: f64,
    /// Relative gap (in units of the largest symplectic eigenvalue) below
    /// which two symplectic eigenvalues are treated as degenerate.
    pub pair: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            sym: 1e-10,
            sympl: 1e-10,
            pos: 1e-12,
            psd: 1e-9,
            recon: 1e-8,
            ineq: 1e-9,
            pair: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn with_ineq(mut self, ineq: f64) -> Self {
        self.ineq = ineq;
        self
    }
}
