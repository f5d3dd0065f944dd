//! Curvature over balls and annuli, and the sharp excess slope.

use crate::error::LabError;
use crate::rescale::{concentration_radius, eps_k};
use radial_core::constants::LAMBDA1;
use radial_core::{curvature_integral_fn, RadialProfile, VSpec};
use serde::{Deserialize, Serialize};

/// `√(1 − 1/√3)`.
pub fn delta_star() -> f64 {
    (1.0 - 1.0 / 3f64.sqrt()).sqrt()
}

/// `24Λ₁`.
pub const EXCESS_SLOPE: f64 = 24.0 * LAMBDA1;

/// `ω₅ ∫_a^b V e^{6u} s⁵ ds` on panels graded from the concentration scale.
pub fn mass_between<P: RadialProfile + ?Sized>(
    v: &VSpec,
    u: &P,
    a: f64,
    b: f64,
) -> Result<f64, LabError> {
    if !(0.0 <= a && a <= b) {
        return Err(LabError::InvalidInput(format!("bad interval [{a}, {b}]")));
    }
    if b > u.support() {
        return Err(radial_core::RadialError::ExtendGrid {
            needed: b,
            available: u.support(),
        }
        .into());
    }
    if a == b {
        return Ok(0.0);
    }
    let u0 = u.u0();
    let u_ref = u0.max(u.value(a));
    let rk = concentration_radius(u0).min(b);
    let mut breaks = vec![a];
    let mut x = rk.max(a);
    while x < b {
        if x > a {
            breaks.push(x);
        }
        x *= 2.0;
    }
    breaks.push(b);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        total += curvature_integral_fn(v, |s| u.value(s), w[0], w[1], u_ref)?;
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantRow {
    pub delta: f64,
    pub curvature: f64,
    /// `curvature − Λ₁`.
    pub deviation: f64,
}

pub fn quantization_check<P: RadialProfile + ?Sized>(
    v: &VSpec,
    u: &P,
    deltas: &[f64],
) -> Result<Vec<QuantRow>, LabError> {
    deltas
        .iter()
        .map(|&delta| {
            if !(delta > 0.0) {
                return Err(LabError::InvalidInput(format!("delta = {delta}")));
            }
            let curvature = mass_between(v, u, 0.0, delta)?;
            Ok(QuantRow {
                delta,
                curvature,
                deviation: curvature - LAMBDA1,
            })
        })
        .collect()
}

/// Curvature on `rho − eps < r < rho + eps`.
pub fn annulus_mass<P: RadialProfile + ?Sized>(
    v: &VSpec,
    u: &P,
    rho: f64,
    eps: f64,
) -> Result<f64, LabError> {
    if !(eps >= 0.0 && eps < rho) {
        return Err(LabError::InvalidInput(format!("need 0 <= eps < rho, got eps = {eps}, rho = {rho}")));
    }
    mass_between(v, u, rho - eps, rho + eps)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExcessFit {
    pub delta: f64,
    pub slope: f64,
    pub intercept: f64,
    /// `(ε_k, curvature − Λ₁)` per member.
    pub points: Vec<(f64, f64)>,
    /// `slope / 24Λ₁`.
    pub ratio: f64,
}

/// Least-squares line through `(ε_k, curvature(δ) − Λ₁)` over the members.
pub fn curvature_excess_slope<P: RadialProfile>(
    members: &[(P, VSpec)],
    delta: f64,
) -> Result<ExcessFit, LabError> {
    let ds = delta_star();
    if !(delta > 0.0 && delta < ds) {
        return Err(LabError::DeltaTooLarge {
            delta,
            delta_star: ds,
        });
    }
    if members.len() < 3 {
        return Err(LabError::InsufficientFamily(members.len()));
    }
    let points = members
        .iter()
        .map(|(u, v)| {
            let c = mass_between(v, u, 0.0, delta)?;
            Ok((eps_k(u.u0()), c - LAMBDA1))
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(LabError::InvalidInput("all members share one ε_k".into()));
    }
    let slope = sxy / sxx;
    Ok(ExcessFit {
        delta,
        slope,
        intercept: my - slope * mx,
        points,
        ratio: slope / EXCESS_SLOPE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::closed_form_defint;
    use radial_core::constants::OMEGA5;
    use radial_core::profiles::Bubble;

    #[test]
    fn delta_star_value() {
        assert!((delta_star() - 0.65012).abs() < 1e-5);
        assert!((EXCESS_SLOPE - 95251.3).abs() < 0.1);
    }

    #[test]
    fn bubble_annulus_closed_form() {
        let v = VSpec::standard();
        let m = annulus_mass(&v, &Bubble::spherical(), 1.0, 0.5).unwrap();
        let exact = 120.0 * 64.0 * OMEGA5 * (closed_form_defint(1.5) - closed_form_defint(0.5));
        assert!((m - exact).abs() < 1e-10 * exact);
        assert_eq!(annulus_mass(&v, &Bubble::spherical(), 1.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn concentrating_bubble_from_below() {
        let v = VSpec::standard();
        let u = Bubble { scale: 1.0 / 50.0 };
        let row = quantization_check(&v, &u, &[0.5]).unwrap()[0];
        let e6 = (6.0 * u.u0()).exp();
        let predicted = -LAMBDA1 * 640.0 / (0.5f64.powi(6) * e6);
        let x: f64 = 0.5 * 50.0;
        let exact = -LAMBDA1 * (10.0 * x.powi(4) + 5.0 * x * x + 1.0) / (1.0 + x * x).powi(5);
        assert!(row.deviation < 0.0);
        assert!((row.deviation / exact - 1.0).abs() < 1e-6, "{row:?} vs {exact}");
        assert!((row.deviation / predicted - 1.0).abs() < 2e-2);
    }

    #[test]
    fn eta_whole_space() {
        let v = VSpec::standard();
        let c = mass_between(&v, &Bubble::spherical(), 0.0, 1e4).unwrap();
        assert!((c / LAMBDA1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_preconditions() {
        let fam = vec![(Bubble::spherical(), VSpec::standard())];
        assert!(matches!(
            curvature_excess_slope(&fam, 0.7),
            Err(LabError::DeltaTooLarge { .. })
        ));
        assert!(matches!(
            curvature_excess_slope(&fam, 0.5),
            Err(LabError::InsufficientFamily(1))
        ));
    }
}
