use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinearError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("fit is ill-conditioned (condition number {condition:e}); increase r_max")]
    IllConditioned { condition: f64 },
    #[error("normalization failed: basis determinant {det:e}")]
    NormalizationFailed { det: f64 },
    #[error("integration stopped at r = {r}: {status}")]
    Incomplete { r: f64, status: String },
    #[error(transparent)]
    Ode(#[from] ode_shooter::OdeError),
    #[error(transparent)]
    Radial(#[from] radial_core::RadialError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
