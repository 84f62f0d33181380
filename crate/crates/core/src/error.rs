use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} exceeds cutoff {cutoff}")]
    IndexExceedsCutoff { index: String, cutoff: usize },

    #[error("duplicate index {0}")]
    DuplicateIndex(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },

    #[error("pairing not determined at this truncation: symbol degree {symbol_degree} exceeds exact degree {exact_degree}")]
    PairingUndetermined {
        symbol_degree: usize,
        exact_degree: i64,
    },

    #[error("insufficient exactness: need exact degree {required}, have {available}")]
    InsufficientExactness { required: usize, available: i64 },

    #[error("kernel is trivial (order-zero convolution part)")]
    TrivialKernel,

    #[error("zero seed yields f = 0, violating f != 0")]
    ZeroSeed,

    #[error("invalid kernel problem: {0}")]
    InvalidProblem(String),

    #[error("coefficient growth guard tripped at index {index}")]
    CoefficientOverflow { index: usize },

    #[error("operator is not separable: {0}")]
    NotSeparable(String),

    #[error("the constant a must be nonzero")]
    ZeroConstant,

    #[error(
        "epsilon violates the bound epsilon > max 1/|a_s|: epsilon = {epsilon}, bound = {required}"
    )]
    EpsilonTooSmall { epsilon: f64, required: f64 },

    #[error("zero vector has no nilpotency index")]
    ZeroVector,

    #[error("exactness exhausted at orbit step {step}")]
    ExactnessExhausted { step: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
