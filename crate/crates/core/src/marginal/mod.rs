//! Local symplectic data of a covariance matrix and the feasibility gates for
//! `(c, d)` pairs, pure-state cones and local temperatures.

mod feasibility;
mod local;
mod temperature;

pub use feasibility::{
    check_matrix_consistency, check_mixed, check_pure, Constraint, ConstraintSlack,
    FeasibilityVerdict,
};
pub use local::{local_diagonal, local_normal_form, LocalDiagonal};
pub use temperature::{b_to_temperature, temperature_to_b, TemperatureVector};
