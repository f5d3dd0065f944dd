//! Residuals of the two-scale expansion of a hybrid profile.

use crate::rescale::concentration_radius;
use radial_core::profiles::{Bubble, Polynomial};
use radial_core::RadialProfile;
use serde::{Deserialize, Serialize};

const SAMPLES: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionChecks {
    /// `sup_{(0,δ]} |u − η̄_k − u(0)(φ + 1)| / u(0)`.
    pub global_residual: f64,
    /// `β / e^{2u(0)}`.
    pub beta_ratio: f64,
    /// `sup r e^{u(r)}` over the profile support, capped at 10.
    pub sup_r_eu: f64,
    /// `Δu(θ₃)/β`, to compare with `Δφ(0) = 24`.
    pub lap_theta3_over_beta: Option<f64>,
}

pub fn expansion_checks<P: RadialProfile + ?Sized>(
    u: &P,
    beta: f64,
    delta: f64,
    theta3: Option<f64>,
) -> ExpansionChecks {
    let u0 = u.u0();
    let bubble = Bubble::from_u0(u0);
    let poly = Polynomial::phi_plus_one(u0);
    let rk = concentration_radius(u0);
    let lo = (1e-3 * rk).min(delta);
    let geo = |a: f64, b: f64, i: usize| a * (b / a).powf(i as f64 / (SAMPLES - 1) as f64);
    let global_residual = (0..SAMPLES)
        .map(|i| {
            let r = geo(lo, delta, i);
            (u.value(r) - bubble.value(r) - poly.value(r)).abs()
        })
        .fold(0.0, f64::max)
        / u0.abs().max(f64::MIN_POSITIVE);
    let hi = u.support().min(10.0);
    let sup_r_eu = (0..SAMPLES)
        .map(|i| {
            let r = geo(lo, hi, i);
            r * u.value(r).exp()
        })
        .filter(|x| x.is_finite())
        .fold(0.0, f64::max);
    ExpansionChecks {
        global_residual,
        beta_ratio: beta * (-2.0 * u0).exp(),
        sup_r_eu,
        lap_theta3_over_beta: theta3.map(|t| u.jet(t).lap() / beta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::profiles::synthetic_hybrid;

    #[test]
    fn limiting_profile_derivatives() {
        let phi = Polynomial::phi();
        assert_eq!(phi.jet(0.0).lap(), 24.0);
        for r in [0.0, 0.4, 1.0, 2.5] {
            assert_eq!(phi.jet(r).bilap(), -384.0);
        }
    }

    #[test]
    fn synthetic_profile_is_exact() {
        let u = synthetic_hybrid(12.0, 12.0);
        let c = expansion_checks(&u, 12.0, 0.5, None);
        assert!(c.global_residual < 1e-15);
        assert!(c.beta_ratio < 1e-9);
        assert!(c.sup_r_eu.is_finite() && c.sup_r_eu > 0.0);
    }
}
