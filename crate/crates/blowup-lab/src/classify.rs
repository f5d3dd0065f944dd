//! Finite-sample labels for the four alternatives of the radial blow-up dichotomy.

use crate::beta::{estimate_beta, BetaFit, BetaOptions};
use crate::error::LabError;
use crate::quant::mass_between;
use ode_shooter::{sign_pattern_check, EventLog};
use radial_core::constants::LAMBDA1;
use radial_core::{RadialProfile, VSpec};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "iv")]
    IV,
    #[serde(rename = "unclassified")]
    Unclassified,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseLabel::I => "i",
            CaseLabel::II => "ii",
            CaseLabel::III => "iii",
            CaseLabel::IV => "iv",
            CaseLabel::Unclassified => "unclassified",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifyOptions {
    /// Radii at which the concentrated mass must reach `Λ₁/2`.
    pub radii: Vec<f64>,
    /// Smallest fitted `β` counted as polyharmonic blow-up.
    pub beta_min: f64,
    pub beta: BetaOptions,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            radii: vec![0.2, 0.1, 0.05],
            beta_min: 1.0,
            beta: BetaOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseEvidence {
    /// `(radius, curvature over the ball)`.
    pub masses: Vec<(f64, f64)>,
    /// Mass `≥ Λ₁/2` at some radius of the schedule.
    pub concentration: bool,
    pub beta: Option<BetaFit>,
    pub beta_error: Option<String>,
    pub polyharmonic: bool,
    pub full_pattern: bool,
    pub pattern: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub label: CaseLabel,
    pub evidence: CaseEvidence,
}

/// Equality is attained by a single bubble whose scale matches the radius.
const THRESHOLD_SLACK: f64 = 1e-9;

fn concentrated(mass: f64) -> bool {
    mass >= 0.5 * LAMBDA1 * (1.0 - THRESHOLD_SLACK)
}

fn label(concentration: bool, polyharmonic: bool, full_pattern: bool) -> CaseLabel {
    match (concentration, polyharmonic) {
        (false, false) => CaseLabel::I,
        (true, false) => CaseLabel::II,
        (false, true) => CaseLabel::III,
        (true, true) if full_pattern => CaseLabel::IV,
        (true, true) => CaseLabel::Unclassified,
    }
}

/// Label one profile from its own data.
pub fn classify_case<P: RadialProfile + ?Sized>(
    u: &P,
    v: &VSpec,
    events: &EventLog,
    opts: &ClassifyOptions,
) -> Result<CaseReport, LabError> {
    let masses = opts
        .radii
        .iter()
        .map(|&r| Ok((r, mass_between(v, u, 0.0, r)?)))
        .collect::<Result<Vec<_>, LabError>>()?;
    let concentration = masses.iter().any(|&(_, m)| concentrated(m));
    let (beta, beta_error) = match estimate_beta(u, &opts.beta) {
        Ok(b) => (Some(b), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let polyharmonic = beta.is_some_and(|b| b.beta >= opts.beta_min);
    let pattern = sign_pattern_check(u, events);
    let full_pattern = pattern.full_pattern();
    Ok(CaseReport {
        label: label(concentration, polyharmonic, full_pattern),
        evidence: CaseEvidence {
            masses,
            concentration,
            beta,
            beta_error,
            polyharmonic,
            full_pattern,
            pattern: pattern.summary(),
        },
    })
}

/// Label a sequence from its most advanced member: concentration at every
/// radius of the schedule and the pattern as seen there, polyharmonic blow-up when the fitted `β` also
/// grows over the last two members.
pub fn classify_family(evidence: &[CaseEvidence]) -> CaseLabel {
    let Some(last) = evidence.last() else {
        return CaseLabel::Unclassified;
    };
    let growing = match evidence.len() {
        1 => true,
        n => match (&evidence[n - 2].beta, &last.beta) {
            (Some(a), Some(b)) => b.beta > a.beta,
            _ => false,
        },
    };
    label(
        !last.masses.is_empty() && last.masses.iter().all(|&(_, m)| concentrated(m)),
        last.polyharmonic && growing,
        last.full_pattern,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use ode_shooter::detect_events;
    use radial_core::profiles::{synthetic_hybrid, Bubble, ConstantProfile};

    fn run<P: RadialProfile>(u: &P) -> CaseReport {
        let log = detect_events(u, 1e-8, 1.8, 3000);
        classify_case(u, &VSpec::standard(), &log, &ClassifyOptions::default()).unwrap()
    }

    #[test]
    fn constant_is_case_i() {
        assert_eq!(run(&ConstantProfile(-5.0)).label, CaseLabel::I);
    }

    #[test]
    fn concentrating_bubble_is_case_ii() {
        assert_eq!(run(&Bubble { scale: 1e-3 }).label, CaseLabel::II);
    }

    #[test]
    fn synthetic_hybrid_is_case_iv() {
        let r = run(&synthetic_hybrid(12.0, 12.0));
        assert_eq!(r.label, CaseLabel::IV, "{:?}", r.evidence);
    }

    #[test]
    fn label_strings() {
        assert_eq!(serde_json::to_string(&CaseLabel::IV).unwrap(), "\"iv\"");
        assert_eq!(CaseLabel::II.to_string(), "ii");
    }
}
