//! ψ₀: the solution with far field `8r² − 48 log r + O(1)`.

use crate::error::LinearError;
use crate::linearized::{solve_linearized, LinearizedSolution};

const TARGET_A: f64 = 8.0;
const TARGET_B: f64 = 0.0;

/// Combine the basis solves `(Δψ(0), Δ²ψ(0)) = (1, 0), (0, 1)` so that `(a, b) = (8, 0)`.
pub fn psi0_profile(r_max: f64) -> Result<LinearizedSolution, LinearError> {
    if !(r_max >= 100.0) {
        return Err(LinearError::InvalidInput(format!(
            "r_max = {r_max}, need at least 100"
        )));
    }
    let e1 = solve_linearized(1.0, 0.0, r_max)?;
    let e2 = solve_linearized(0.0, 1.0, r_max)?;
    let (a1, b1) = (e1.fit.a, e1.fit.b);
    let (a2, b2) = (e2.fit.a, e2.fit.b);
    let det = a1 * b2 - a2 * b1;
    let scale = (a1.abs() + a2.abs()) * (b1.abs() + b2.abs());
    if !(det.abs() > 1e-10 * scale) {
        return Err(LinearError::NormalizationFailed { det });
    }
    let x1 = (TARGET_A * b2 - TARGET_B * a2) / det;
    let x2 = (a1 * TARGET_B - b1 * TARGET_A) / det;
    solve_linearized(x1, x2, r_max)
}
