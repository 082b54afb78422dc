//! Gaussian marginal toolkit.
//!
//! Decides whether a vector of symplectic eigenvalues `d` and a vector of
//! local symplectic diagonal elements `c` can belong to the same strictly
//! positive `2n x 2n` matrix, builds such a matrix when they can, and turns
//! the result into squeezer plus passive-network preparation recipes.
//!
//! All matrices use the interleaved mode ordering `(x1, p1, ..., xn, pn)`.

pub mod circuit;
pub mod entropy;
mod error;
pub mod marginal;
pub mod symplectic;
pub mod synthesis;
mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use circuit::{
    circuit_from_covariance, circuit_from_mixed, circuit_from_pure, parse_circuit, passive_to_two_mode_rotations,
    write_circuit, CircuitSource, PassiveDecomposition, PassiveOp, PreparationCircuit, Quadrature,
    Squeezer,
};
pub use entropy::{
    entanglement_profile, entropy_s, entropy_s_inverse, entropy_upper_bound, gaussian_entropy,
    sharing_feasible, EntropyReport,
};
pub use marginal::{
    b_to_temperature, check_matrix_consistency, check_mixed, check_pure, local_diagonal,
    local_normal_form, temperature_to_b, Constraint, ConstraintSlack, FeasibilityVerdict,
    LocalDiagonal, TemperatureVector,
};
pub use symplectic::{
    euler_decompose, random_symplectic, symplectic_eigenvalues, symplectic_form,
    symplectic_trace, williamson, CovarianceMatrix, EulerFactors, SpectrumKind, SpectrumVector,
    SymplecticTransform, Williamson,
};
pub use synthesis::{
    random_feasible_pair, solve_two_mode, synthesize, synthesize_pure,
    two_mode_eigenvalues_closed_form, SynthesisStep, SynthesisTrace, TwoModeBlock,
};
