use std::fmt;

use gqmp_core::Error;

/// Terminal outcome of a command other than success.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Infeasible(String),
    /// Exit 2.
    Input(String),
    /// Exit 3.
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Infeasible(_) => 1,
            Failure::Input(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Failure::Infeasible(_) => "infeasible",
            Failure::Input(_) => "input_error",
            Failure::Internal(_) => "internal_error",
        }
    }

    pub fn input(message: impl fmt::Display) -> Self {
        Failure::Input(message.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Infeasible(m) | Failure::Input(m) | Failure::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::InfeasibleInput { .. } | Error::InfeasiblePair { .. } => Failure::Infeasible(message),
            Error::ToleranceCollapse { .. }
            | Error::NumericalFailure(_)
            | Error::InvalidTrace { .. }
            | Error::SpectralPairingFailure { .. }
            | Error::DegenerateSubspaceFailure
            | Error::InversionFailure { .. } => Failure::Internal(message),
            _ => Failure::Input(message),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}
