//! Prescribed-curvature descriptors `V(r)` and hypothesis validators.

use crate::error::RadialError;
use crate::grid::RadialField;
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VSpec {
    /// `V ≡ c0`.
    Constant { c0: f64 },
    /// `V = 120 + q r²`.
    Quadratic { q: f64 },
    /// `V = V∞(r) e^{−a r² − b r⁴}`.
    GaussianWeighted { base: Box<VSpec>, a: f64, b: f64 },
    /// Sampled values, interpolated.
    Tabulated { field: RadialField },
}

impl Default for VSpec {
    fn default() -> Self {
        VSpec::standard()
    }
}

impl VSpec {
    pub fn constant(c0: f64) -> Self {
        VSpec::Constant { c0 }
    }

    /// The normalisation `V ≡ 120` of the spherical solution.
    pub fn standard() -> Self {
        VSpec::Constant { c0: 120.0 }
    }

    pub fn quadratic(q: f64) -> Self {
        VSpec::Quadratic { q }
    }

    /// `base · e^{−a r² − b r⁴}`, merging nested weights and dropping trivial ones.
    pub fn gaussian(base: VSpec, a: f64, b: f64) -> Self {
        match base {
            VSpec::GaussianWeighted {
                base: inner,
                a: a0,
                b: b0,
            } => VSpec::gaussian(*inner, a0 + a, b0 + b),
            other if a == 0.0 && b == 0.0 => other,
            other => VSpec::GaussianWeighted {
                base: Box::new(other),
                a,
                b,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            VSpec::Constant { .. } => "constant",
            VSpec::Quadratic { .. } => "quadratic",
            VSpec::GaussianWeighted { .. } => "gaussian-weighted",
            VSpec::Tabulated { .. } => "tabulated",
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            VSpec::Constant { c0 } => *c0,
            VSpec::Quadratic { q } => 120.0 + q * r * r,
            VSpec::GaussianWeighted { base, a, b } => {
                let r2 = r * r;
                base.value(r) * (-a * r2 - b * r2 * r2).exp()
            }
            VSpec::Tabulated { field } => {
                let rr = r.clamp(field.grid().r_min(), field.grid().r_max());
                field.eval(rr).unwrap_or(f64::NAN)
            }
        }
    }

    /// `V'(r)`; tabulated data has no derivative.
    pub fn derivative(&self, r: f64) -> Result<f64> {
        match self {
            VSpec::Constant { .. } => Ok(0.0),
            VSpec::Quadratic { q } => Ok(2.0 * q * r),
            VSpec::GaussianWeighted { base, a, b } => {
                let w = (-a * r * r - b * r.powi(4)).exp();
                let dw = -(2.0 * a * r + 4.0 * b * r.powi(3)) * w;
                Ok(base.derivative(r)? * w + base.value(r) * dw)
            }
            VSpec::Tabulated { .. } => Err(RadialError::GradientUnavailable("tabulated")),
        }
    }

    /// `r V'(r) / V(r)`.
    pub fn r_log_derivative(&self, r: f64) -> Result<f64> {
        match self {
            VSpec::GaussianWeighted { base, a, b } => {
                Ok(base.r_log_derivative(r)? - 2.0 * a * r * r - 4.0 * b * r.powi(4))
            }
            _ => Ok(r * self.derivative(r)? / self.value(r)),
        }
    }

    /// Positivity sampled on [0, r_max].
    pub fn validate(&self, r_max: f64) -> Result<()> {
        if let VSpec::Constant { c0 } = self {
            if !(*c0 > 0.0) || !c0.is_finite() {
                return Err(RadialError::Hypothesis {
                    hypothesis: "positivity",
                    r: 0.0,
                    detail: format!("V = {c0}"),
                });
            }
            return Ok(());
        }
        let n = 2000;
        for i in 0..=n {
            let r = r_max * i as f64 / n as f64;
            let v = self.value(r);
            if !(v > 0.0) || !v.is_finite() {
                return Err(RadialError::Hypothesis {
                    hypothesis: "positivity",
                    r,
                    detail: format!("V = {v}"),
                });
            }
        }
        Ok(())
    }

    /// Whether `V = 120 + O(r²)` near 0 holds by construction.
    pub fn satisfies_ass_vk(&self) -> bool {
        match self {
            VSpec::Constant { c0 } => *c0 == 120.0,
            VSpec::Quadratic { .. } => true,
            VSpec::GaussianWeighted { base, .. } => base.satisfies_ass_vk(),
            VSpec::Tabulated { .. } => false,
        }
    }

    /// Samples `d/dr (V(r) / e^{a r² + b r⁴}) ≤ 0` on (0, r_max].
    pub fn check_cond_vinfty(&self, a: f64, b: f64, r_max: f64) -> Result<()> {
        let n = 2000;
        let g = |r: f64| self.value(r) * (-a * r * r - b * r.powi(4)).exp();
        for i in 1..=n {
            let r = r_max * i as f64 / n as f64;
            let slope = match self.derivative(r) {
                Ok(dv) => {
                    let w = (-a * r * r - b * r.powi(4)).exp();
                    (dv - self.value(r) * (2.0 * a * r + 4.0 * b * r.powi(3))) * w
                }
                Err(_) => {
                    let h = r_max / n as f64;
                    (g(r) - g(r - h)) / h
                }
            };
            let scale = g(r).abs().max(1e-300);
            if slope > 1e-12 * scale {
                return Err(RadialError::Hypothesis {
                    hypothesis: "condVinfty",
                    r,
                    detail: format!("slope {slope:e} > 0"),
                });
            }
        }
        Ok(())
    }
}
