//! Zero-radius ratios against their limits `βθ₂² → 1/3`, `βθ₄⁴ → 1/12`.

use ode_shooter::EventLog;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const BETA_THETA2_SQ_LIMIT: f64 = 1.0 / 3.0;
pub const BETA_THETA4_4TH_LIMIT: f64 = 1.0 / 12.0;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ThetaRatios {
    /// Keys `beta_theta2_sq`, `beta_theta4_4th`, `theta3_over_theta4`, `theta1_over_theta2`.
    pub values: BTreeMap<String, f64>,
    /// Radii that were not found.
    pub missing: Vec<String>,
}

impl ThetaRatios {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Relative errors of the two limits, where available.
    pub fn limit_errors(&self) -> (Option<f64>, Option<f64>) {
        (
            self.get("beta_theta2_sq")
                .map(|v| (v / BETA_THETA2_SQ_LIMIT - 1.0).abs()),
            self.get("beta_theta4_4th")
                .map(|v| (v / BETA_THETA4_4TH_LIMIT - 1.0).abs()),
        )
    }
}

pub fn theta_ratios(events: &EventLog, beta: f64) -> ThetaRatios {
    let mut out = ThetaRatios::default();
    let named = [
        ("theta1", events.theta1()),
        ("theta2", events.theta2()),
        ("theta3", events.theta3()),
        ("theta4", events.theta4()),
    ];
    for (n, v) in named {
        if v.is_none() {
            out.missing.push(n.to_string());
        }
    }
    let [t1, t2, t3, t4] = named.map(|(_, v)| v);
    let mut put = |k: &str, v: Option<f64>| {
        if let Some(v) = v {
            out.values.insert(k.to_string(), v);
        }
    };
    put("beta_theta2_sq", t2.map(|t| beta * t * t));
    put("beta_theta4_4th", t4.map(|t| beta * t.powi(4)));
    put("theta3_over_theta4", t3.zip(t4).map(|(a, b)| a / b));
    put("theta1_over_theta2", t1.zip(t2).map(|(a, b)| a / b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ode_shooter::detect_events;
    use radial_core::profiles::synthetic_hybrid;

    #[test]
    fn empty_log_is_flagged() {
        let r = theta_ratios(&EventLog::default(), 3.0);
        assert!(r.is_empty());
        assert_eq!(r.missing.len(), 4);
    }

    #[test]
    fn synthetic_beta_fifty() {
        let u = synthetic_hybrid(50.0, 50.0);
        let log = detect_events(&u, 1e-9, 1.5, 4000);
        let r = theta_ratios(&log, 50.0);
        let (e2, e4) = r.limit_errors();
        assert!(e2.unwrap() < 0.1 && e4.unwrap() < 0.1, "{r:?}");
    }
}
