//! Fit of `u ≈ c − β(1 − r²)² + γ log r` away from the origin and the unit sphere.

use crate::error::LabError;
use radial_core::RadialProfile;
use serde::{Deserialize, Serialize};

pub const DEFAULT_WINDOW: [(f64, f64); 2] = [(0.3, 0.7), (1.3, 1.7)];
/// Largest accepted RMS residual relative to `β`.
pub const DEFAULT_MAX_RESIDUAL: f64 = 1e-2;
const SAMPLES_PER_INTERVAL: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaFit {
    pub beta: f64,
    pub offset: f64,
    /// Coefficient of `log r`; `−2` for a single concentrated bubble.
    pub log_coeff: f64,
    /// RMS misfit divided by `|β|`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BetaOptions {
    pub window: Vec<(f64, f64)>,
    pub max_residual: f64,
}

impl Default for BetaOptions {
    fn default() -> Self {
        BetaOptions {
            window: DEFAULT_WINDOW.to_vec(),
            max_residual: DEFAULT_MAX_RESIDUAL,
        }
    }
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut m = a;
        for i in 0..3 {
            m[i][k] = b[i];
        }
        *xk = det(m) / d;
    }
    Some(x)
}

/// Least-squares `β` on the window; rejects fits with `β ≤ 0` or a large residual.
pub fn estimate_beta<P: RadialProfile + ?Sized>(
    u: &P,
    opts: &BetaOptions,
) -> Result<BetaFit, LabError> {
    let mut rs = Vec::new();
    for &(lo, hi) in &opts.window {
        if !(0.0 < lo && lo < hi) || (lo < 1.0 && hi > 1.0) {
            return Err(LabError::InvalidInput(format!("bad window [{lo}, {hi}]")));
        }
        for i in 0..SAMPLES_PER_INTERVAL {
            rs.push(lo + (hi - lo) * (i as f64 + 0.5) / SAMPLES_PER_INTERVAL as f64);
        }
    }
    let support = u.support();
    if rs.iter().any(|&r| r > support) {
        return Err(LabError::InvalidInput(format!(
            "window exceeds the profile support {support}"
        )));
    }
    let cols = |r: f64| [1.0, -(1.0 - r * r).powi(2), r.ln()];
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    let ys: Vec<f64> = rs.iter().map(|&r| u.value(r)).collect();
    if ys.iter().any(|y| !y.is_finite()) {
        return Err(LabError::InvalidInput("profile not finite on the window".into()));
    }
    for (&r, &y) in rs.iter().zip(&ys) {
        let c = cols(r);
        for i in 0..3 {
            atb[i] += c[i] * y;
            for j in 0..3 {
                ata[i][j] += c[i] * c[j];
            }
        }
    }
    let x = solve3(ata, atb).ok_or_else(|| LabError::InvalidInput("singular fit".into()))?;
    let rss: f64 = rs
        .iter()
        .zip(&ys)
        .map(|(&r, &y)| {
            let c = cols(r);
            let f = c[0] * x[0] + c[1] * x[1] + c[2] * x[2];
            (y - f).powi(2)
        })
        .sum();
    let beta = x[1];
    let residual = (rss / rs.len() as f64).sqrt() / beta.abs().max(f64::MIN_POSITIVE);
    if !(beta > 0.0) || residual > opts.max_residual {
        return Err(LabError::NotPolyharmonic { beta, residual });
    }
    Ok(BetaFit {
        beta,
        offset: x[0],
        log_coeff: x[2],
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::profiles::{synthetic_hybrid, Bubble, Polynomial};

    #[test]
    fn pure_polyharmonic() {
        let p = Polynomial {
            c0: -7.0,
            c2: 14.0,
            c4: -7.0,
        };
        let f = estimate_beta(&p, &BetaOptions::default()).unwrap();
        assert!((f.beta - 7.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn synthetic_hybrid_recovers_height() {
        let f = estimate_beta(&synthetic_hybrid(12.0, 12.0), &BetaOptions::default()).unwrap();
        assert!((f.beta / 12.0 - 1.0).abs() < 1e-6, "{f:?}");
        assert!((f.log_coeff + 2.0).abs() < 1e-6);
    }

    #[test]
    fn bubble_rejected() {
        let e = estimate_beta(&Bubble::spherical(), &BetaOptions::default()).unwrap_err();
        assert!(matches!(e, LabError::NotPolyharmonic { .. }), "{e}");
    }

    #[test]
    fn window_across_sphere_rejected() {
        let opts = BetaOptions {
            window: vec![(0.5, 1.5)],
            ..Default::default()
        };
        assert!(estimate_beta(&Bubble::spherical(), &opts).is_err());
    }
}
