use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("refine grid: {0}")]
    RefineGrid(String),
    #[error("profile not polyharmonic-type (beta = {beta:e}, residual = {residual:e})")]
    NotPolyharmonic { beta: f64, residual: f64 },
    #[error("delta = {delta} is not below delta* = {delta_star}")]
    DeltaTooLarge { delta: f64, delta_star: f64 },
    #[error("insufficient family: {0} members, need at least 3")]
    InsufficientFamily(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Radial(#[from] radial_core::RadialError),
    #[error(transparent)]
    Ode(#[from] ode_shooter::OdeError),
    #[error(transparent)]
    Linear(#[from] linear_lab::LinearError),
    #[error(transparent)]
    Solver(#[from] entire_solver::SolverError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}
