//! Entire radial solutions of `(−Δ)³u = V e^{6u}` on R^6 with prescribed
//! total curvature, built from the logarithmic potential
//! `v(x) = (1/γ₆) ∫ log(1/|x−y|) V e^{−6|y|⁴} e^{6(v+c)} dy + λΔv(0)(|x|⁴ − 2|x|²)`
//! and `u = v + c − |x|⁴`.

pub mod error;
pub mod example3;
pub mod grid;
pub mod kernel;
pub mod pohozaev;
pub mod solve;

pub use error::SolverError;
pub use example3::{example3_solve, Example3Config, Example3Solution};
pub use grid::NystromGrid;
pub use kernel::{build_log_kernel, log_kernel, KernelTable};
pub use pohozaev::pohozaev_residual;
pub use solve::{
    lambda_continuation, picard_solve, Continuation, EntireSolution, FixedPointConfig, Method,
    SweepRecord,
};

pub type Result<T> = std::result::Result<T, SolverError>;
