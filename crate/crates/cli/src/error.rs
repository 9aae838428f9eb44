//! Exit-code classification: 1 for usage errors, 2 for internal or
//! precision failures (0 and 3 are verdict codes, not errors).

use gridctl_core::GridError;

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation: malformed flags, out-of-range nodes, unsupported
    /// format combinations. Exit code 1.
    Usage(String),
    /// Internal or precision failure: ambiguous eigenvalue grouping,
    /// oracle breakdown, invalid witness. Exit code 2.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Internal(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<GridError> for CliError {
    fn from(err: GridError) -> Self {
        match err {
            GridError::InvalidDimensions(_)
            | GridError::CapacityExceeded { .. }
            | GridError::NodeOutOfRange { .. }
            | GridError::AxisOutOfRange { .. }
            | GridError::EmptyNodeSet
            | GridError::InvalidModulus { .. }
            | GridError::NotSimple { .. }
            | GridError::BrickMismatch { .. }
            | GridError::ArityMismatch { .. }
            | GridError::NotPrime { .. }
            | GridError::ComponentOutOfRange { .. } => CliError::Usage(err.to_string()),
            GridError::NotAnEigenvector { .. }
            | GridError::PrecisionAmbiguity { .. }
            | GridError::PrecisionOutOfRange { .. }
            | GridError::OracleFailure(_)
            | GridError::KalmanTooLarge { .. }
            | GridError::WitnessInvalid(_) => CliError::Internal(err.to_string()),
        }
    }
}
