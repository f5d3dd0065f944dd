//! Radial solves of the linearized equation and the far-field fit.

use crate::asymptotic::AsymptoticFit;
use crate::error::LinearError;
use nalgebra::{DMatrix, DVector};
use ode_shooter::ivp::{integrate_system, Tolerances, Trajectory};
use radial_core::constants::{GAMMA6, OMEGA5};
use radial_core::profiles::Bubble;
use radial_core::{quad, RadialProfile};
use serde::Serialize;
use std::io::Write;

/// Smallest `r_max` accepted by [`solve_linearized`].
pub const MIN_R_MAX: f64 = 50.0;
const FIT_SAMPLES: usize = 400;
const MAX_CONDITION: f64 = 1e10;

/// `720 e^{6η(r)}`.
pub fn potential(r: f64) -> f64 {
    let q = 1.0 + r * r;
    720.0 * 64.0 / q.powi(6)
}

/// Integrate `Δ³ψ = −720 e^{6η} ψ` from `(ψ(0), Δψ(0), Δ²ψ(0))`.
pub fn integrate_linear(
    psi0: f64,
    lap_psi0: f64,
    bilap_psi0: f64,
    r_max: f64,
) -> Result<Trajectory, LinearError> {
    let tol = Tolerances {
        rel: 1e-13,
        abs: 1e-15,
    };
    let traj = integrate_system(
        |r, psi| -potential(r) * psi,
        psi0,
        lap_psi0,
        bilap_psi0,
        r_max,
        tol,
        &[],
        f64::INFINITY,
    )?;
    if !traj.status.is_complete() {
        return Err(LinearError::Incomplete {
            r: traj.r_end(),
            status: format!("{:?}", traj.status),
        });
    }
    Ok(traj)
}

#[derive(Clone, Debug)]
pub struct LinearizedSolution {
    pub lap_psi0: f64,
    pub bilap_psi0: f64,
    pub r_max: f64,
    pub psi: Trajectory,
    pub fit: AsymptoticFit,
    /// Weighted RMS of the fit, relative to the largest sample.
    pub fit_residual: f64,
    pub condition: f64,
    /// `(720/γ₆) ∫ ψ e^{6η}` over R⁶.
    pub alpha_integral: f64,
}

#[derive(Clone, Debug, Serialize)]
struct Summary {
    lap_psi0: f64,
    bilap_psi0: f64,
    r_max: f64,
    a: f64,
    b: f64,
    d: f64,
    alpha: f64,
    alpha_integral: f64,
    residuals: Residuals,
}

#[derive(Clone, Debug, Serialize)]
struct Residuals {
    fit: f64,
    condition: f64,
    identity: f64,
    alpha_mismatch: f64,
}

impl LinearizedSolution {
    /// `|α − (6a + 48b)| / (|α| + 1)`.
    pub fn identity_residual(&self) -> f64 {
        let f = &self.fit;
        (f.alpha - (6.0 * f.a + 48.0 * f.b)).abs() / (f.alpha.abs() + 1.0)
    }

    /// `|α − alpha_integral| / (|α| + 1)`.
    pub fn alpha_mismatch(&self) -> f64 {
        (self.fit.alpha - self.alpha_integral).abs() / (self.fit.alpha.abs() + 1.0)
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<(), LinearError> {
        let s = Summary {
            lap_psi0: self.lap_psi0,
            bilap_psi0: self.bilap_psi0,
            r_max: self.r_max,
            a: self.fit.a,
            b: self.fit.b,
            d: self.fit.d,
            alpha: self.fit.alpha,
            alpha_integral: self.alpha_integral,
            residuals: Residuals {
                fit: self.fit_residual,
                condition: self.condition,
                identity: self.identity_residual(),
                alpha_mismatch: self.alpha_mismatch(),
            },
        };
        serde_json::to_writer_pretty(w, &s)?;
        Ok(())
    }

    /// Jet columns `r,psi,dpsi,lap_psi,dlap_psi,bilap_psi,dbilap_psi`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<(), LinearError> {
        writeln!(w, "r,psi,dpsi,lap_psi,dlap_psi,bilap_psi,dbilap_psi")?;
        for j in self.psi.states() {
            let v = j.w;
            writeln!(
                w,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                j.r, v[0], v[1], v[2], v[3], v[4], v[5]
            )?;
        }
        Ok(())
    }
}

/// Weighted least squares for `a r² + b r⁴ + d − α log r` on `[r_max/2, r_max]`, weight `1/r`.
///
/// Two decaying columns `r⁻² log r` and `r⁻²` absorb the leading remainder,
/// which is forced by the `r⁻⁸` tail of `720 e^{6η} b r⁴`.
pub fn fit_far_field<P: RadialProfile + ?Sized>(
    psi: &P,
    r_max: f64,
) -> Result<(AsymptoticFit, f64, f64), LinearError> {
    let lo = 0.5 * r_max;
    let rs: Vec<f64> = (0..FIT_SAMPLES)
        .map(|i| lo + (r_max - lo) * i as f64 / (FIT_SAMPLES - 1) as f64)
        .collect();
    let cols = [
        |r: f64| r * r,
        |r: f64| r.powi(4),
        |_| 1.0,
        |r: f64| -r.ln(),
        |r: f64| r.ln() / (r * r),
        |r: f64| 1.0 / (r * r),
    ];
    let scale: Vec<f64> = cols
        .iter()
        .map(|c| rs.iter().map(|&r| c(r).abs()).fold(0.0, f64::max))
        .collect();
    let mut a = DMatrix::zeros(rs.len(), cols.len());
    let mut y = DVector::zeros(rs.len());
    for (i, &r) in rs.iter().enumerate() {
        let w = 1.0 / r;
        for (k, c) in cols.iter().enumerate() {
            a[(i, k)] = w * c(r) / scale[k];
        }
        y[i] = w * psi.value(r);
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = smax / smin;
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(LinearError::IllConditioned { condition });
    }
    let x = svd
        .solve(&y, 1e-300)
        .map_err(|e| LinearError::InvalidInput(e.to_string()))?;
    let resid = &a * &x - &y;
    let ymax = y.amax().max(f64::MIN_POSITIVE);
    let rms = (resid.norm_squared() / rs.len() as f64).sqrt() / ymax;
    let fit = AsymptoticFit {
        a: x[0] / scale[0],
        b: x[1] / scale[1],
        d: x[2] / scale[2],
        alpha: x[3] / scale[3],
    };
    Ok((fit, rms, condition))
}

/// `(720/γ₆) ∫ ψ e^{6η}`, by quadrature on `[0, r_max]` plus the fitted tail.
fn alpha_integral(psi: &Trajectory, fit: &AsymptoticFit, r_max: f64) -> Result<f64, LinearError> {
    let eta = Bubble::spherical();
    let dens = |r: f64, p: f64| p * (6.0 * eta.value(r)).exp() * r.powi(5);
    let mut breaks = vec![0.0];
    let mut b = 0.25;
    while b < r_max {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(r_max);
    let inner = quad::adaptive_panels(
        |r| dens(r, psi.value(r)),
        &breaks,
        1e-14,
        1e-12,
        20_000,
    )?;
    let tail = quad::adaptive_to_infinity(|r| dens(r, fit.value(r)), r_max, 1e-16, 1e-12)?;
    Ok(720.0 / GAMMA6 * OMEGA5 * (inner + tail))
}

/// Solve with `ψ(0) = 0` and the given `(Δψ(0), Δ²ψ(0))`, then fit the far field.
pub fn solve_linearized(
    lap_psi0: f64,
    bilap_psi0: f64,
    r_max: f64,
) -> Result<LinearizedSolution, LinearError> {
    if !(r_max >= MIN_R_MAX && r_max.is_finite()) {
        return Err(LinearError::InvalidInput(format!(
            "r_max = {r_max}, need at least {MIN_R_MAX}"
        )));
    }
    if !(lap_psi0.is_finite() && bilap_psi0.is_finite()) {
        return Err(LinearError::InvalidInput(format!(
            "initial data ({lap_psi0}, {bilap_psi0})"
        )));
    }
    let psi = integrate_linear(0.0, lap_psi0, bilap_psi0, r_max)?;
    let (fit, fit_residual, condition) = if lap_psi0 == 0.0 && bilap_psi0 == 0.0 {
        (AsymptoticFit::default(), 0.0, 1.0)
    } else {
        fit_far_field(&psi, r_max)?
    };
    let alpha_integral = alpha_integral(&psi, &fit, r_max)?;
    Ok(LinearizedSolution {
        lap_psi0,
        bilap_psi0,
        r_max,
        psi,
        fit,
        fit_residual,
        condition,
        alpha_integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_data_is_zero() {
        let s = solve_linearized(0.0, 0.0, 60.0).unwrap();
        for r in [0.5, 10.0, 60.0] {
            assert_eq!(s.psi.value(r), 0.0);
        }
        assert_eq!(s.alpha_integral, 0.0);
    }

    #[test]
    fn short_domain_rejected() {
        assert!(matches!(
            solve_linearized(1.0, 0.0, 10.0),
            Err(LinearError::InvalidInput(_))
        ));
    }

    #[test]
    fn fit_recovers_exact_coefficients() {
        let truth = AsymptoticFit {
            a: 1.5,
            b: -0.25,
            d: 3.0,
            alpha: 7.0,
        };
        let (fit, rms, _) = fit_far_field(&truth, 100.0).unwrap();
        assert!(rms < 1e-12);
        assert!((fit.alpha - 7.0).abs() < 1e-6, "{fit:?}");
        assert!((fit.b + 0.25).abs() < 1e-12);
    }
}
