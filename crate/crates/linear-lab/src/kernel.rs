//! The bounded solution `Ψ = (1 − r²)/(1 + r²)`.

use radial_core::constants::{GAMMA6, OMEGA5};
use radial_core::profiles::{Bubble, KernelPsi};
use radial_core::quad;
use radial_core::RadialProfile;

use crate::error::LinearError;

pub fn exact_kernel_solution(r: f64) -> f64 {
    if r.is_infinite() {
        return -1.0;
    }
    let r2 = r * r;
    (1.0 - r2) / (1.0 + r2)
}

/// `((−Δ)³Ψ − 720 Ψ e^{6η}) / 720 e^{6η(0)}` at `r`.
pub fn kernel_operator_residual(r: f64) -> f64 {
    let lap3 = KernelPsi.lap3(r).unwrap_or(f64::NAN);
    let e6 = (6.0 * Bubble::spherical().value(r)).exp();
    (-lap3 - 720.0 * exact_kernel_solution(r) * e6) / (720.0 * 64.0)
}

/// `(720/γ₆) ∫_{R⁶} Ψ e^{6η}`.
pub fn kernel_alpha_integral() -> Result<f64, LinearError> {
    let f = |r: f64| {
        let q = 1.0 + r * r;
        exact_kernel_solution(r) * 64.0 / q.powi(6) * r.powi(5)
    };
    let inner = quad::adaptive(f, 0.0, 1.0, 1e-15, 1e-13)?;
    let outer = quad::adaptive_to_infinity(f, 1.0, 1e-15, 1e-13)?;
    Ok(720.0 / GAMMA6 * OMEGA5 * (inner + outer))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(exact_kernel_solution(0.0), 1.0);
        assert_eq!(exact_kernel_solution(1.0), 0.0);
        assert_eq!(exact_kernel_solution(f64::INFINITY), -1.0);
        assert!((exact_kernel_solution(1e8) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn operator_residual_vanishes() {
        for r in [0.0, 0.3, 1.0, 2.0, 7.5, 40.0] {
            assert!(kernel_operator_residual(r).abs() < 1e-14, "r={r}");
        }
    }

    #[test]
    fn zero_alpha() {
        assert!(kernel_alpha_integral().unwrap().abs() < 1e-9);
    }
}
