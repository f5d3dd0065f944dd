use radial_core::RadialError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("invalid IVP: {0}")]
    InvalidSpec(String),
    #[error("bracket failure: no sign change on [{lo}, {hi}] (residuals {f_lo:e}, {f_hi:e})")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("stiffness failure at r = {0}")]
    Stiffness(f64),
    #[error(transparent)]
    Radial(#[from] RadialError),
}
