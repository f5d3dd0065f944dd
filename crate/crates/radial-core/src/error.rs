use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadialError {
    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),
    #[error("out of range: r = {r} not in [{lo}, {hi}]")]
    OutOfRange { r: f64, lo: f64, hi: f64 },
    #[error("use series start: the integral identity degenerates at r0 = 0")]
    UseSeriesStart,
    #[error("rescale first: e^(6u) overflows (max u = {0})")]
    RescaleFirst(f64),
    #[error("extend grid: need radius {needed}, grid ends at {available}")]
    ExtendGrid { needed: f64, available: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("gradient unavailable for {0} potential")]
    GradientUnavailable(&'static str),
    #[error("potential violates {hypothesis} at r = {r}: {detail}")]
    Hypothesis {
        hypothesis: &'static str,
        r: f64,
        detail: String,
    },
    #[error("quadrature failed to converge on [{a}, {b}]")]
    Quadrature { a: f64, b: f64 },
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for RadialError {
    fn from(e: csv::Error) -> Self {
        RadialError::Csv(e.to_string())
    }
}
