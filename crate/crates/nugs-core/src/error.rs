use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sampling set is empty")]
    EmptySet,

    #[error("separation undefined: set has fewer than 2 points")]
    UndefinedSeparation,

    #[error("duplicate points in sampling set (closer than {tol:.1e})")]
    DuplicatePoints { tol: f64 },

    #[error(
        "insufficient extent: operation needs radius {needed}, set is realized to {extent}"
    )]
    InsufficientExtent { needed: f64, extent: f64 },

    #[error("gap {gap} is not below the critical value 1/4")]
    SupercriticalGap { gap: f64 },

    #[error("probe budget too small: {got} probes, minimum {min}")]
    ProbeBudget { got: usize, min: usize },

    #[error("sample/weight length mismatch: {samples} samples, {weights} weights")]
    SampleCount { samples: usize, weights: usize },

    #[error("spaces are not nested: {0}")]
    NotNested(String),

    #[error("bad space spec {spec:?}: {reason}")]
    SpaceSpec { spec: String, reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed {what} at line {line}: {reason}")]
    Parse {
        what: &'static str,
        line: usize,
        reason: String,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
