//! The neck between the bubble and the sphere, where `r^p e^u` decreases.

use crate::error::LabError;
use crate::rescale::concentration_radius;
use radial_core::RadialProfile;
use serde::{Deserialize, Serialize};

const SAMPLES: usize = 4000;
const NO_THETA1_END: f64 = 1.0;

/// `c_p = √(1 + p/(2 − p))`.
pub fn neck_constant(p: f64) -> f64 {
    (1.0 + p / (2.0 - p)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeckFlag {
    Stationary,
    /// No stationary point before the search end; `t_k` is the end.
    NoStationaryPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeckReport {
    pub p: f64,
    pub c_p: f64,
    pub start: f64,
    pub t_k: f64,
    pub flag: NeckFlag,
    /// `r^p e^u` decreasing on `(c_p r_k, t_k)`.
    pub monotone: bool,
    pub u_at_tk: f64,
    /// `u(t_k) ≤ u(θ₁) + C`, when `θ₁` is known.
    pub bound_holds: Option<bool>,
}

/// Locate `t_k`, the first zero of `p + r u'(r)` past `c_p r_k`, searching up to
/// `θ₁` when given and `r = 1` otherwise.
pub fn neck_analysis<P: RadialProfile + ?Sized>(
    u: &P,
    p: f64,
    theta1: Option<f64>,
    bound_c: f64,
) -> Result<NeckReport, LabError> {
    if !(p > 1.0 && p < 2.0) {
        return Err(LabError::InvalidInput(format!("p = {p} not in (1, 2)")));
    }
    let c_p = neck_constant(p);
    let start = c_p * concentration_radius(u.u0());
    let end = theta1.unwrap_or(NO_THETA1_END).min(u.support());
    if !end.is_finite() || end <= start {
        return Err(LabError::InvalidInput(format!(
            "empty neck search range [{start:e}, {end:e}]"
        )));
    }
    let h = |r: f64| p + r * u.jet(r).du();
    let ratio = (end / start).powf(1.0 / SAMPLES as f64);
    let mut prev = start;
    let mut found = None;
    for i in 1..=SAMPLES {
        let r = if i == SAMPLES { end } else { start * ratio.powi(i as i32) };
        let hr = h(r);
        if hr >= 0.0 {
            let (mut lo, mut hi) = (prev, r);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if h(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-14 * hi {
                    break;
                }
            }
            found = Some(0.5 * (lo + hi));
            break;
        }
        prev = r;
    }
    let (t_k, flag) = match found {
        Some(t) => (t, NeckFlag::Stationary),
        None => (end, NeckFlag::NoStationaryPoint),
    };
    // every sample before the first sign change is negative
    let monotone = h(start) < 0.0;
    let u_at_tk = u.value(t_k);
    let bound_holds = theta1.map(|t| u_at_tk <= u.value(t) + bound_c);
    Ok(NeckReport {
        p,
        c_p,
        start,
        t_k,
        flag,
        monotone,
        u_at_tk,
        bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::profiles::{synthetic_hybrid, Bubble};

    #[test]
    fn constant_values() {
        assert_eq!(neck_constant(1.5), 2.0);
        assert!(neck_constant(2.0 - 1e-12) > 1e5);
    }

    #[test]
    fn bubble_decreases_past_two() {
        let eta = Bubble::spherical();
        // r^{1.5}·2/(1+r²) has its maximum at r = √3 < 2
        let rep = neck_analysis(&eta, 1.5, Some(50.0), 0.0).unwrap();
        assert_eq!(rep.start, 2.0);
        assert_eq!(rep.flag, NeckFlag::NoStationaryPoint);
        assert!(rep.monotone);
    }

    #[test]
    fn synthetic_neck_before_theta1() {
        let u = synthetic_hybrid(10.0, 10.0);
        let rep = neck_analysis(&u, 1.5, Some(0.5), 5.0).unwrap();
        assert_eq!(rep.flag, NeckFlag::Stationary);
        assert!(rep.monotone && rep.t_k > rep.start && rep.t_k < 0.5);
        assert_eq!(rep.bound_holds, Some(true));
    }
}
