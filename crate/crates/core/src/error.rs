use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix has shape {rows}x{cols}, expected a square matrix of even dimension")]
    BadShape { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric (asymmetry {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not strictly positive (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix violates the uncertainty relation (smallest eigenvalue of gamma + i sigma is {min_eigenvalue:e})")]
    NotPhysical { min_eigenvalue: f64 },

    #[error("state is not pure (symplectic eigenvalue {value} deviates from 1)")]
    NotPure { value: f64 },

    #[error("matrix is not symplectic (defect {defect:e})")]
    NotSymplectic { defect: f64 },

    #[error("matrix is not passive (orthogonal-symplectic defect {defect:e})")]
    NotPassive { defect: f64 },

    #[error("eigenvalues of -gamma sigma gamma sigma do not pair into doublets (gap {gap:e})")]
    SpectralPairingFailure { gap: f64 },

    #[error("could not stabilize a canonical basis inside a degenerate symplectic subspace")]
    DegenerateSubspaceFailure,

    #[error("vector lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("vector is empty")]
    Empty,

    #[error("vector is not sorted non-decreasingly at index {index}")]
    NotSorted { index: usize },

    #[error("entry {index} must be strictly positive, got {value}")]
    NonPositive { index: usize, value: f64 },

    #[error("entry {index} must be non-negative, got {value}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("temperature {index} must be strictly positive, got {value}")]
    NonPositiveTemperature { index: usize, value: f64 },

    #[error("value {value} is below 1")]
    BelowOne { value: f64 },

    #[error("two-mode targets c=({c1}, {c2}) d=({d1}, {d2}) violate the two-mode inequalities")]
    InfeasiblePair { c1: f64, c2: f64, d1: f64, d2: f64 },

    #[error("target vectors are infeasible (worst slack {worst_slack:e})")]
    InfeasibleInput { worst_slack: f64 },

    #[error("recursive sub-problem became infeasible (worst slack {worst_slack:e})")]
    ToleranceCollapse { worst_slack: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("entropy inversion failed for value {value}")]
    InversionFailure { value: f64 },

    #[error("synthesis trace is inconsistent (replay defect {defect:e})")]
    InvalidTrace { defect: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}
