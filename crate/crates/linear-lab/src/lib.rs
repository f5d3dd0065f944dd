//! `(−Δ)³ψ = 720 e^{6η} ψ` on R⁶: radial solves, the far-field fit
//! `ψ = a r² + b r⁴ + d − α log r + o(1)`, the bounded element
//! `Ψ = (1 − r²)/(1 + r²)` and the normalized profile ψ₀.

pub mod asymptotic;
pub mod error;
pub mod kernel;
pub mod linearized;
pub mod psi0;

pub use asymptotic::{asymptotic_table_check, AsymptoticFit, TableResiduals};
pub use error::LinearError;
pub use kernel::{exact_kernel_solution, kernel_alpha_integral, kernel_operator_residual};
pub use linearized::{integrate_linear, solve_linearized, LinearizedSolution};
pub use psi0::psi0_profile;

pub type Result<T> = std::result::Result<T, LinearError>;
