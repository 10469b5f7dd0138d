use thiserror::Error;

/// Errors raised by the constrained sensitivity-analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("coordinate {index} = {value} lies outside the unit interval")]
    OutOfUnitCube { index: usize, value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error("non-finite model value {value} at {point:?}")]
    NonFinite { value: f64, point: Vec<f64> },

    #[error("empty feasible sample: none of {n} points satisfied {constraints}")]
    EmptyFeasibleSample { n: usize, constraints: String },

    #[error("no feasible samples")]
    NoFeasibleSamples,

    #[error("degenerate variance: D = {0}")]
    DegenerateVariance(f64),

    #[error("domain not detected at resolution {probe_k}; retry with a larger probe grid")]
    DomainNotDetected { probe_k: usize },

    #[error("node budget exceeded: {nodes} nodes requested, budget is {budget}")]
    BudgetExceeded { nodes: u128, budget: u128 },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
