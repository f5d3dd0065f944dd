use ode_shooter::OdeError;
use radial_core::RadialError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("kernel quadrature failure at r = {r}, s = {s}")]
    KernelQuadrature { r: f64, s: f64 },
    #[error("fixed point diverged after {sweeps} sweeps at damping {theta}; reduce θ or Λ")]
    Diverged { sweeps: usize, theta: f64 },
    #[error("rescale failure: e^(6u) overflows (max exponent {0})")]
    RescaleFailure(f64),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("singular Newton system")]
    Singular,
    #[error(transparent)]
    Radial(#[from] RadialError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}
