//! Radial calculus for the sixth-order Q-curvature equation in R^6.
//!
//! Everything here acts on radially symmetric functions `f(|x|)`, so the
//! Laplacian is `f'' + 5 f' / r` with the removable limit `6 f''(0)` at the
//! origin.

pub mod constants;
pub mod error;
pub mod grid;
pub mod jet;
pub mod ops;
pub mod profiles;
pub mod quad;
pub mod vspec;

pub use constants::Constants;
pub use error::RadialError;
pub use grid::{Grading, RadialField, RadialGrid};
pub use jet::JetState;
pub use ops::{
    closed_form_defint, closed_form_defint_printed, curvature_integral, curvature_integral_fn,
    derivative_from_laplacian, gauge_transform, outward_integrate, radial_laplacian, rescale,
    rescale_onto, spherical_profile,
};
pub use profiles::RadialProfile;
pub use vspec::VSpec;

pub type Result<T> = std::result::Result<T, RadialError>;
