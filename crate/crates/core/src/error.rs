//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid mode: sigma must be positive, got {sigma}")]
    InvalidMode { sigma: f64 },

    #[error("singular modal block at sigma={sigma}: {detail}")]
    SingularBlock { sigma: f64, detail: String },

    #[error(
        "ill-conditioned shifted block at lambda={lambda}, sigma={sigma} \
         (condition estimate {cond:.3e})"
    )]
    IllConditionedBlock { lambda: f64, sigma: f64, cond: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("fit window: {0}")]
    FitWindow(String),

    #[error("unreliable scan data, tail certificate failed at lambda = {lambdas:?}")]
    UnreliableData { lambdas: Vec<f64> },

    #[error("witness inapplicable: {0}")]
    WitnessInapplicable(String),

    #[error("undefined ratio: forcing is identically zero")]
    UndefinedRatio,

    #[error("stability violation: mode sigma={sigma} has root with Re={re}")]
    StabilityViolation { sigma: f64, re: f64 },

    #[error("energy underflow inside fit window (shrink the window): {0}")]
    ShrinkWindow(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
