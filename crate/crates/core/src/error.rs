use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("expected {expected} values, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error(
        "initial data not resolved: top-octave energy fraction {fraction:e} exceeds {threshold:e}"
    )]
    NotResolved { fraction: f64, threshold: f64 },

    #[error("time must be finite, got {0}")]
    InvalidTime(f64),

    #[error("at least one evaluation time is required")]
    EmptyTimes,

    #[error("time step {dt} exceeds the stability bound {bound}")]
    Unstable { dt: f64, bound: f64 },

    #[error("dense operator of size {size} exceeds the cap of {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("metric is not positive definite at grid point {point}")]
    NotPositiveDefinite { point: usize },

    #[error("metric determinant inconsistent with inverse metric at grid point {point}")]
    InconsistentMetric { point: usize },

    #[error("requested {requested} modes but at most {max} are trusted at this resolution")]
    TrustRegion { requested: usize, max: usize },

    #[error("intensity profile is identically zero")]
    ZeroIntensity,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
