//! Symplectic-form bookkeeping, validity checks, the Williamson normal form,
//! the Euler (Bloch-Messiah) factorization and random orbit sampling.

mod basis;
mod covariance;
mod euler;
mod form;
pub(crate) mod linalg;
mod random;
pub(crate) mod spectrum;
mod williamson;

pub use covariance::CovarianceMatrix;
pub use euler::{euler_decompose, EulerFactors};
pub use form::{
    mode_permutation, passive_defect, symplectic_defect, symplectic_form, SymplecticForm,
    SymplecticTransform,
};
pub use random::{
    passive_from_unitary, random_covariance, random_passive, random_symplectic,
    random_symplectic_with, random_unitary, unitary_from_passive, RandomCovariance,
};
pub use spectrum::{SpectrumKind, SpectrumVector};
pub use williamson::{symplectic_eigenvalues, symplectic_trace, williamson, Williamson};
