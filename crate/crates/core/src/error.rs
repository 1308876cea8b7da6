use thiserror::Error;

/// Errors produced by the numerical core and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("moment of order {order} unavailable for fading law `{law}`")]
    MomentUnavailable { law: String, order: u32 },

    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),

    #[error("pivot {value:e} at row {row} lost positive definiteness")]
    NonPositivePivot { row: usize, value: f64 },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("fading law `{0}` has an atom at zero; the high-SNR offset diverges")]
    DivergentOffset(String),

    #[error("quadrature did not reach tolerance {tolerance:e} (estimate {estimate:e}) within {limit} subintervals")]
    Quadrature {
        tolerance: f64,
        estimate: f64,
        limit: usize,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unrecognized fading tag `{0}`")]
    FadingTag(String),

    #[error("malformed band dump: {0}")]
    BandFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
