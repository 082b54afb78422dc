//! Constructive direction: build an explicit matrix with prescribed local
//! symplectic diagonal `c` and symplectic spectrum `d`.

mod induction;
mod sampling;
mod two_mode;

pub use induction::{synthesize, synthesize_pure, SynthesisStep, SynthesisTrace};
pub use sampling::random_feasible_pair;
pub use two_mode::{solve_two_mode, two_mode_eigenvalues_closed_form, TwoModeBlock};
