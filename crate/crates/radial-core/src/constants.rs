use serde::Serialize;
use std::f64::consts::PI;

/// `Δ³ log(1/|x|) = γ₆ δ₀` in R^6.
pub const GAMMA6: f64 = 64.0 * PI * PI * PI;
/// Area of the unit sphere S^5.
pub const OMEGA5: f64 = PI * PI * PI;
/// Area of the unit sphere S^6.
pub const OMEGA6: f64 = 16.0 * PI * PI * PI / 15.0;
/// Total Q-curvature of the round S^6, `5! |S^6|`.
pub const LAMBDA1: f64 = 128.0 * PI * PI * PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Constants {
    pub gamma6: f64,
    pub omega5: f64,
    pub omega6: f64,
    #[serde(rename = "Lambda1")]
    pub lambda1: f64,
}

impl Constants {
    pub const fn get() -> Self {
        Constants {
            gamma6: GAMMA6,
            omega5: OMEGA5,
            omega6: OMEGA6,
            lambda1: LAMBDA1,
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::get()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda1_relations() {
        assert_eq!(LAMBDA1, 2.0 * GAMMA6);
        assert!((LAMBDA1 - 120.0 * OMEGA6).abs() < 1e-12 * LAMBDA1);
        assert!((LAMBDA1 - 3968.804).abs() < 1e-3);
    }

    #[test]
    fn serializes_with_lambda1_key() {
        let s = serde_json::to_string(&Constants::get()).unwrap();
        assert!(s.contains("\"Lambda1\""));
    }
}
