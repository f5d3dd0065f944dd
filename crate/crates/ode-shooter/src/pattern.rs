//! Verdicts on the sign structure of a hybrid profile.

use crate::events::{Direction, EventLog, Quantity};
use radial_core::RadialProfile;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated { detail: String },
    /// A required zero was never crossed.
    PatternAbsent { missing: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    fn absent(missing: &str) -> Self {
        Verdict::PatternAbsent {
            missing: missing.to_string(),
        }
    }

    fn violated(detail: String) -> Self {
        Verdict::Violated { detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternReport {
    /// Δ²u > 0 on (0, θ₄), < 0 after.
    pub bilap: Verdict,
    /// (Δu)' > 0 on (0, θ₃), < 0 after.
    pub dlap: Verdict,
    /// u' < 0 on (0, θ₁) ∪ (θ̃₁, R), > 0 on (θ₁, θ̃₁).
    pub du: Verdict,
    /// θ₂ < θ₁ < θ̃₁ and θ₄ < θ₃.
    pub ordering: Verdict,
}

impl PatternReport {
    pub fn full_pattern(&self) -> bool {
        self.bilap.holds() && self.dlap.holds() && self.du.holds() && self.ordering.holds()
    }

    /// First missing zero, if any.
    pub fn missing(&self) -> Option<&str> {
        [&self.du, &self.dlap, &self.bilap, &self.ordering]
            .into_iter()
            .find_map(|v| match v {
                Verdict::PatternAbsent { missing } => Some(missing.as_str()),
                _ => None,
            })
    }

    pub fn summary(&self) -> String {
        if self.full_pattern() {
            return "full pattern".to_string();
        }
        if let Some(m) = self.missing() {
            return format!("pattern absent ({m} missing)");
        }
        let detail = [&self.bilap, &self.dlap, &self.du, &self.ordering]
            .into_iter()
            .find_map(|v| match v {
                Verdict::Violated { detail } => Some(detail.clone()),
                _ => None,
            })
            .unwrap_or_default();
        format!("pattern violated: {detail}")
    }
}

fn single_fall(log: &EventLog, q: Quantity, name: &str, start: f64) -> Verdict {
    let c = log.get(q);
    if start <= 0.0 {
        return Verdict::violated(format!("{name}: starts non-positive ({start:e})"));
    }
    match c.len() {
        0 => Verdict::absent(name),
        1 if c[0].direction == Direction::Falling => Verdict::Holds,
        n => Verdict::violated(format!("{name}: {n} sign changes")),
    }
}

fn du_verdict(log: &EventLog, start: f64) -> Verdict {
    if start >= 0.0 {
        return Verdict::violated(format!("theta1: u' starts non-negative ({start:e})"));
    }
    let c = &log.du;
    match c.len() {
        0 => Verdict::absent("theta1"),
        1 => Verdict::absent("theta1_tilde"),
        2 if c[0].direction == Direction::Rising && c[1].direction == Direction::Falling => {
            Verdict::Holds
        }
        n => Verdict::violated(format!("u': {n} sign changes")),
    }
}

fn ordering(log: &EventLog) -> Verdict {
    let names = [
        ("theta1", log.theta1()),
        ("theta1_tilde", log.theta1_tilde()),
        ("theta2", log.theta2()),
        ("theta3", log.theta3()),
        ("theta4", log.theta4()),
    ];
    for (n, v) in names {
        if v.is_none() {
            return Verdict::absent(n);
        }
    }
    let [t1, t1t, t2, t3, t4] = names.map(|(_, v)| v.unwrap_or(f64::NAN));
    if !(t2 < t1 && t1 < t1t) {
        return Verdict::violated(format!(
            "theta2 = {t2:e}, theta1 = {t1:e}, theta1_tilde = {t1t:e} out of order"
        ));
    }
    if !(t4 < t3) {
        return Verdict::violated(format!("theta4 = {t4:e} >= theta3 = {t3:e}"));
    }
    Verdict::Holds
}

/// Check the case-iv sign structure from the crossings and the jet just off the origin.
pub fn sign_pattern_check<P: RadialProfile + ?Sized>(profile: &P, events: &EventLog) -> PatternReport {
    let first = Quantity::ALL
        .iter()
        .filter_map(|q| events.get(*q).first().map(|c| c.r))
        .fold(f64::INFINITY, f64::min);
    let probe = if first.is_finite() {
        1e-3 * first
    } else {
        1e-3 * profile.support().min(1.0)
    };
    let j = profile.jet(probe);
    PatternReport {
        bilap: single_fall(events, Quantity::Bilap, "theta4", j.bilap()),
        dlap: single_fall(events, Quantity::DLap, "theta3", j.dlap()),
        du: du_verdict(events, j.du()),
        ordering: ordering(events),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::detect_events;
    use radial_core::profiles::{synthetic_hybrid, Bubble};

    #[test]
    fn eta_has_no_pattern() {
        let eta = Bubble::spherical();
        let log = detect_events(&eta, 1e-6, 20.0, 2000);
        let rep = sign_pattern_check(&eta, &log);
        assert!(!rep.full_pattern());
        assert_eq!(
            rep.du,
            Verdict::PatternAbsent {
                missing: "theta1".into()
            }
        );
    }

    #[test]
    fn synthetic_hybrid_has_pattern() {
        let u = synthetic_hybrid(8.0, 8.0);
        let log = detect_events(&u, 1e-7, 1.5, 4000);
        let rep = sign_pattern_check(&u, &log);
        assert!(rep.full_pattern(), "{}", rep.summary());
    }
}
