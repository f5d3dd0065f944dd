//! Radial operators, representation identities and curvature integrals.

use crate::constants::OMEGA5;
use crate::error::RadialError;
use crate::grid::RadialField;
use crate::jet::JetState;
use crate::profiles::{Bubble, RadialProfile};
use crate::quad::{adaptive, adaptive_panels, gl8};
use crate::vspec::VSpec;
use crate::Result;
use std::sync::Arc;

/// Largest exponent accepted before `e^{6u}` is considered an overflow.
const MAX_EXPONENT: f64 = 700.0;

/// `Δf = f'' + 5f'/r` at every node, `6 f''(0)` at the origin.
pub fn radial_laplacian(f: &RadialField) -> Result<RadialField> {
    if f.grid().len() < 5 {
        return Err(RadialError::InsufficientResolution(format!(
            "radial Laplacian needs at least 5 nodes, grid has {}",
            f.grid().len()
        )));
    }
    let values = f
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let d = f.node_derivatives(i);
            if r == 0.0 {
                6.0 * d[2]
            } else {
                d[2] + 5.0 * d[1] / r
            }
        })
        .collect();
    RadialField::new(f.grid().clone(), values)?.with_order(f.order())
}

fn cell_integral<F: Fn(f64) -> f64>(f: &RadialField, a: f64, b: f64, g: F) -> Result<f64> {
    let mut err = None;
    let total = {
        let breaks = breakpoints(f, a, b);
        let rule = gl8();
        breaks
            .windows(2)
            .map(|w| {
                rule.integrate(w[0], w[1], |s| match f.eval(s) {
                    Ok(v) => g(s) * v,
                    Err(e) => {
                        err = Some(e);
                        0.0
                    }
                })
            })
            .sum()
    };
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

fn breakpoints(f: &RadialField, a: f64, b: f64) -> Vec<f64> {
    let mut v = vec![a];
    v.extend(f.nodes().iter().cloned().filter(|&x| x > a && x < b));
    v.push(b);
    v
}

/// `w'(r) = r^{-5} ∫₀ʳ Δw(s) s⁵ ds` given samples of `Δw`.
pub fn derivative_from_laplacian(g: &RadialField, r: f64) -> Result<f64> {
    let grid = g.grid();
    if !(r > 0.0) || r > grid.r_max() || grid.r_min() > 0.0 {
        return Err(RadialError::OutOfRange {
            r,
            lo: grid.r_min(),
            hi: grid.r_max(),
        });
    }
    let m = cell_integral(g, 0.0, r, |s| s.powi(5))?;
    Ok(m / r.powi(5))
}

/// Reconstruct `f(r1)` from `f(r0)`, `f'(r0)` and samples of `Δf`:
///
/// `f(r1) = f(r0) + r0⁵ f'(r0)(r0⁻⁴ − r1⁻⁴)/4 + ∫_{r0}^{r1} Δf(s) s⁵ (s⁻⁴ − r1⁻⁴)/4 ds`.
pub fn outward_integrate(
    f0: f64,
    f0prime: f64,
    lap: &RadialField,
    r0: f64,
    r1: f64,
) -> Result<f64> {
    if r0 == 0.0 {
        return Err(RadialError::UseSeriesStart);
    }
    let grid = lap.grid();
    for r in [r0, r1] {
        if !grid.contains(r) {
            return Err(RadialError::OutOfRange {
                r,
                lo: grid.r_min(),
                hi: grid.r_max(),
            });
        }
    }
    if !(r0 < r1) {
        return Err(RadialError::InvalidParameter(format!(
            "need 0 < r0 < r1, got r0={r0}, r1={r1}"
        )));
    }
    let inv4 = r1.powi(-4);
    let boundary = r0.powi(5) * f0prime * (r0.powi(-4) - inv4) / 4.0;
    let bulk = cell_integral(lap, r0, r1, |s| (s - s.powi(5) * inv4) / 4.0)?;
    Ok(f0 + boundary + bulk)
}

/// `ω₅ ∫₀ʳ V e^{6u} s⁵ ds` over a sampled field; `r = ∞` means the whole grid.
pub fn curvature_integral(v: &VSpec, u: &RadialField, r: f64) -> Result<f64> {
    let grid = u.grid();
    let r_end = if r.is_infinite() { grid.r_max() } else { r };
    if r_end < grid.r_min() || r_end > grid.r_max() {
        return Err(RadialError::OutOfRange {
            r,
            lo: grid.r_min(),
            hi: grid.r_max(),
        });
    }
    let umax = u.max_value();
    if 6.0 * umax > MAX_EXPONENT {
        return Err(RadialError::RescaleFirst(umax));
    }
    if umax == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let integrand = |s: f64| -> f64 {
        let val = u.eval(s).unwrap_or(f64::NEG_INFINITY);
        v.value(s) * (6.0 * val).exp() * s.powi(5)
    };
    let breaks = breakpoints(u, grid.r_min(), r_end);
    let total = adaptive_panels(integrand, &breaks, 0.0, 1e-13, 8 * breaks.len() + 1000)?;
    Ok(OMEGA5 * total)
}

/// `ω₅ ∫_a^b V e^{6u} s⁵ ds` for a profile given as a function, by adaptive quadrature.
///
/// The exponent is shifted by `u_ref` (normally u(0)) so that very peaked
/// profiles stay representable.
pub fn curvature_integral_fn<F: Fn(f64) -> f64>(
    v: &VSpec,
    u: F,
    a: f64,
    b: f64,
    u_ref: f64,
) -> Result<f64> {
    if 6.0 * u_ref > MAX_EXPONENT {
        return Err(RadialError::RescaleFirst(u_ref));
    }
    let integrand = |s: f64| v.value(s) * (6.0 * (u(s) - u_ref)).exp() * s.powi(5);
    let scaled = if b.is_infinite() {
        crate::quad::adaptive(integrand, a, a.max(1.0) * 64.0, 0.0, 1e-14)?
            + crate::quad::adaptive_to_infinity(integrand, a.max(1.0) * 64.0, 0.0, 1e-14)?
    } else {
        adaptive(integrand, a, b, 0.0, 1e-14)?
    };
    Ok(OMEGA5 * scaled * (6.0 * u_ref).exp())
}

/// `∫₀ʳ s⁵/(1+s²)⁶ ds = (1/60)(1 − (10r⁴ + 5r² + 1)/(1+r²)⁵)`.
pub fn closed_form_defint(r: f64) -> f64 {
    if r.is_infinite() {
        return 1.0 / 60.0;
    }
    let r2 = r * r;
    let q = 1.0 + r2;
    // r⁶(r⁴+5r²+10)/(60 q⁵) avoids cancellation for small r
    r2 * r2 * r2 * (r2 * r2 + 5.0 * r2 + 10.0) / (60.0 * q.powi(5))
}

/// The same closed form with the middle term printed as `5r⁵`.
pub fn closed_form_defint_printed(r: f64) -> f64 {
    let q = 1.0 + r * r;
    (1.0 - (10.0 * r.powi(4) + 5.0 * r.powi(5) + 1.0) / q.powi(5)) / 60.0
}

/// Jet of `η = log(2/(1+r²))` at `r`.
pub fn spherical_profile(r: f64) -> JetState {
    Bubble::spherical().jet(r)
}

/// `u_λ(r) = u(λr) + log λ`, sampled on the grid scaled by `1/λ`.
pub fn rescale(u: &RadialField, lambda: f64) -> Result<RadialField> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(RadialError::InvalidParameter(format!("lambda = {lambda}")));
    }
    let grid = Arc::new(u.grid().scaled(1.0 / lambda)?);
    let shift = lambda.ln();
    RadialField::new(grid, u.values().iter().map(|x| x + shift).collect())?.with_order(u.order())
}

/// `u_λ(r) = u(λr) + log λ` resampled onto an existing grid.
pub fn rescale_onto(
    u: &RadialField,
    lambda: f64,
    target: Arc<crate::grid::RadialGrid>,
) -> Result<RadialField> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(RadialError::InvalidParameter(format!("lambda = {lambda}")));
    }
    let needed = lambda * target.r_max();
    if needed > u.grid().r_max() * (1.0 + 1e-14) {
        return Err(RadialError::ExtendGrid {
            needed,
            available: u.grid().r_max(),
        });
    }
    let shift = lambda.ln();
    let values = target
        .nodes()
        .iter()
        .map(|&r| {
            u.eval((lambda * r).min(u.grid().r_max()))
                .map(|x| x + shift)
        })
        .collect::<Result<Vec<_>>>()?;
    RadialField::new(target, values)?.with_order(u.order())
}

/// Move the weight `e^{P}`, `P = −a r² − b r⁴`, from the solution into the potential:
/// returns `(u − P/6, V e^{P})`, leaving `V e^{6u}` unchanged.
pub fn gauge_transform(u: &RadialField, v: &VSpec, a: f64, b: f64) -> (RadialField, VSpec) {
    let p = |r: f64| -a * r * r - b * r.powi(4);
    let u_new = u.map(|r, x| x - p(r) / 6.0);
    (u_new, VSpec::gaussian(v.clone(), a, b))
}
