//! The Pohozaev balance for the kernel potential of an entire solution.

use crate::error::SolverError;
use crate::solve::EntireSolution;
use radial_core::constants::{LAMBDA1, OMEGA5};
use radial_core::VSpec;

/// `(2α/Λ₁)(α − Λ₁) − (1/3)∫ (y·∇K) e^{6w} dy` with
/// `K = V e^{6c} e^{−6r⁴ + 6λΔu(0)(r⁴−2r²)}` and `K e^{6w} = V e^{6u}`.
///
/// Vanishes for exact solutions; tabulated `V` has no gradient.
pub fn pohozaev_residual(sol: &EntireSolution, v: &VSpec) -> Result<f64, SolverError> {
    let g = &sol.grid;
    let l = sol.lambda * sol.lap_v0;
    let mut alpha = 0.0;
    let mut moment = 0.0;
    for i in 0..g.len() {
        let r = g.nodes[i];
        let w = OMEGA5 * g.weights[i] * r.powi(5) * sol.density[i];
        let r4 = r.powi(4);
        let rlogk = v.r_log_derivative(r)? - 24.0 * r4 + 24.0 * l * (r4 - r * r);
        alpha += w;
        moment += rlogk * w;
    }
    Ok(2.0 * alpha / LAMBDA1 * (alpha - LAMBDA1) - moment / 3.0)
}
