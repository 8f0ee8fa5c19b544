use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// The input space or arc does not exhibit a hypothesis the construction
/// relies on at the chosen resolution. These are data problems, not bugs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypothesisFailure {
    #[error("no step path joins point {from} to point {to}")]
    NoPath { from: usize, to: usize },
    #[error("seeds {a} and {b} are {distance} apart, closer than the net radius {radius}")]
    SeedsTooClose {
        a: usize,
        b: usize,
        distance: f64,
        radius: f64,
    },
    #[error("point {point} is not covered by any net ball")]
    Uncovered { point: usize },
    #[error("blob chain stalled at discretization index {index}: the next blob does not meet the current one")]
    ChainStall { index: usize },
    #[error("blob of {owner} cannot reach its successor blob from point {from}")]
    BlobUnreachable { owner: usize, from: usize },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("point index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("operation requires a non-empty point set")]
    EmptySet,
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hypothesis failure: {0}")]
    Hypothesis(#[from] HypothesisFailure),
    #[error("scale {iota} is below the resolution floor {floor}")]
    ScaleFloor { iota: f64, floor: f64 },
    #[error("verification failed in {stage}: {detail}")]
    Verification { stage: &'static str, detail: String },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Coarse grouping of errors, used by drivers to choose exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Hypothesis,
    Usage,
    Verification,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Hypothesis(_) => ErrorClass::Hypothesis,
            Error::Verification { .. } => ErrorClass::Verification,
            _ => ErrorClass::Usage,
        }
    }
}
