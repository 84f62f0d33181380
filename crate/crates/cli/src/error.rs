use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_TASK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("csv unsupported for complex series")]
    CsvComplex,

    #[error("csv unsupported for {0} reports")]
    CsvUnsupported(&'static str),

    #[error(transparent)]
    Core(#[from] crcalc::Error),

    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),
}

impl CliError {
    /// Bad input maps to 2, failures inside a computation to 3.
    pub fn exit_code(&self) -> i32 {
        use crcalc::Error as E;
        match self {
            CliError::Io { .. }
            | CliError::Json(_)
            | CliError::Schema(_)
            | CliError::CsvComplex
            | CliError::CsvUnsupported(_) => EXIT_INPUT,
            CliError::Core(e) => match e {
                E::IndexExceedsCutoff { .. }
                | E::DuplicateIndex(_)
                | E::DimMismatch { .. }
                | E::AxisOutOfRange { .. }
                | E::TrivialKernel
                | E::ZeroSeed
                | E::InvalidProblem(_)
                | E::NotSeparable(_)
                | E::ZeroConstant
                | E::EpsilonTooSmall { .. }
                | E::ZeroVector
                | E::InvalidParameter(_)
                | E::Empty(_) => EXIT_INPUT,
                _ => EXIT_INTERNAL,
            },
            CliError::Write(_) => EXIT_INTERNAL,
        }
    }
}
