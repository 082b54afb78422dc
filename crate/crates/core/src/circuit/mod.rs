//! Preparation recipes: squeezed or thermal seeds followed by squeezers and
//! passive networks of beam splitters and phase shifters.

mod format;
mod prepare;
mod reck;

pub use format::{parse_circuit, write_circuit};
pub use prepare::{
    circuit_from_covariance, circuit_from_mixed, circuit_from_pure, CircuitSource, PreparationCircuit, Quadrature, Squeezer,
};
pub use reck::{compose_passive, passive_to_two_mode_rotations, PassiveDecomposition, PassiveOp};
