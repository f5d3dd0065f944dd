//! The far-field expansion `ψ = a r² + b r⁴ + d − α log r` and its jet.

use radial_core::{JetState, RadialProfile};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub alpha: f64,
}

impl AsymptoticFit {
    /// Each jet component as (polynomial part, log part).
    fn parts(&self, r: f64) -> [(f64, f64); 6] {
        let (a, b, al) = (self.a, self.b, self.alpha);
        let r2 = r * r;
        [
            (a * r2 + b * r2 * r2 + self.d, -al * r.ln()),
            (2.0 * a * r + 4.0 * b * r2 * r, -al / r),
            (12.0 * a + 32.0 * b * r2, -4.0 * al / r2),
            (64.0 * b * r, 8.0 * al / (r2 * r)),
            (384.0 * b, 16.0 * al / (r2 * r2)),
            (0.0, -64.0 * al / (r2 * r2 * r)),
        ]
    }
}

impl RadialProfile for AsymptoticFit {
    fn jet(&self, r: f64) -> JetState {
        JetState::new(r, self.parts(r).map(|(p, l)| p + l))
    }

    fn lap3(&self, _r: f64) -> Option<f64> {
        Some(0.0)
    }
}

pub const TABLE_NAMES: [&str; 5] = ["dpsi", "lap_psi", "dlap_psi", "bilap_psi", "dbilap_psi"];

/// Largest normalized residual of each tabulated line at each probe radius.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct TableResiduals {
    pub radii: Vec<f64>,
    /// Name → one residual per probe radius.
    pub lines: BTreeMap<String, Vec<f64>>,
}

impl TableResiduals {
    pub fn max(&self) -> f64 {
        self.lines.values().flatten().cloned().fold(0.0, f64::max)
    }
}

/// Compare the jet of `psi` against the expansion at each radius.
///
/// A line's residual is the mismatch divided by the size of its `α` term,
/// or by the polynomial part when `α = 0`.
pub fn asymptotic_table_check<P: RadialProfile + ?Sized>(
    psi: &P,
    fit: &AsymptoticFit,
    radii: &[f64],
) -> TableResiduals {
    let mut lines: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for &r in radii {
        let j = psi.jet(r);
        for (k, (poly, log)) in fit.parts(r).into_iter().enumerate().skip(1) {
            let norm = if log != 0.0 {
                log.abs()
            } else {
                poly.abs().max(1.0)
            };
            let res = (j.w[k] - poly - log).abs() / norm;
            lines.entry(TABLE_NAMES[k - 1].to_string()).or_default().push(res);
        }
    }
    TableResiduals {
        radii: radii.to_vec(),
        lines,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::profiles::Polynomial;

    #[test]
    fn r_squared_matches_a_line() {
        let p = Polynomial {
            c0: 0.0,
            c2: 1.0,
            c4: 0.0,
        };
        let fit = AsymptoticFit {
            a: 1.0,
            ..Default::default()
        };
        let t = asymptotic_table_check(&p, &fit, &[1.0, 10.0, 100.0]);
        assert_eq!(t.max(), 0.0);
        assert_eq!(p.jet(3.0).lap(), 12.0);
        assert_eq!(p.jet(3.0).bilap(), 0.0);
    }

    #[test]
    fn r_fourth_matches_b_line() {
        let p = Polynomial {
            c0: 0.0,
            c2: 0.0,
            c4: 1.0,
        };
        let fit = AsymptoticFit {
            b: 1.0,
            ..Default::default()
        };
        let t = asymptotic_table_check(&p, &fit, &[1.0, 10.0, 100.0]);
        assert!(t.max() < 1e-15);
        assert_eq!(p.jet(2.0).lap(), 128.0);
        assert_eq!(p.jet(2.0).bilap(), 384.0);
    }

    #[test]
    fn log_jet_is_consistent() {
        let f = AsymptoticFit {
            a: 0.0,
            b: 0.0,
            d: 0.0,
            alpha: 1.0,
        };
        let r = 3.0;
        let h = 1e-5;
        for k in [0, 2, 4] {
            let d = (f.jet(r + h).w[k] - f.jet(r - h).w[k]) / (2.0 * h);
            assert!((d - f.jet(r).w[k + 1]).abs() < 1e-8 * (1.0 + d.abs()), "k={k}");
        }
    }
}
