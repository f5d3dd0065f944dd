//! Per-member diagnostics and the family report.

use crate::classify::{classify_case, classify_family, CaseLabel, CaseReport, ClassifyOptions};
use crate::error::LabError;
use crate::expansion::{expansion_checks, ExpansionChecks};
use crate::family::{BlowupFamily, Member, Provenance};
use crate::neck::{neck_analysis, NeckReport};
use crate::quant::{annulus_mass, curvature_excess_slope, quantization_check, ExcessFit, QuantRow};
use crate::rescale::{concentration_radius, eps_k};
use crate::theta::{theta_ratios, ThetaRatios, BETA_THETA2_SQ_LIMIT, BETA_THETA4_4TH_LIMIT};
use crate::trend::{decreasing, increasing, trend_to, TrendCheck};
use ode_shooter::{detect_events, EventLog, ThetaArrays};
use radial_core::profiles::Bubble;
use radial_core::{Constants, RadialProfile};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnalysisOptions {
    pub deltas: Vec<f64>,
    /// `(ρ, ε)` pairs.
    pub annuli: Vec<(f64, f64)>,
    pub neck_p: f64,
    /// `C` in `u(t_k) ≤ u(θ₁) + C`.
    pub neck_bound: f64,
    pub event_r_max: f64,
    pub event_samples: usize,
    /// `η_k` is compared with `η` on `[0, eta_x_max]`.
    pub eta_x_max: f64,
    pub expansion_delta: f64,
    pub excess_delta: Option<f64>,
    /// Relative tolerance of the θ-limit trends.
    pub trend_tolerance: f64,
    pub classify: ClassifyOptions,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            deltas: vec![0.1, 0.25, 0.5],
            annuli: vec![(1.0, 0.5)],
            neck_p: 1.5,
            neck_bound: 5.0,
            event_r_max: 1.8,
            event_samples: 4000,
            eta_x_max: 5.0,
            expansion_delta: 0.5,
            excess_delta: Some(0.5),
            trend_tolerance: 0.25,
            classify: ClassifyOptions::default(),
        }
    }
}

impl AnalysisOptions {
    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |m: String| Err(LabError::InvalidInput(m));
        if self.deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
            return bad(format!("deltas must lie in (0, 1): {:?}", self.deltas));
        }
        if self.annuli.iter().any(|&(rho, eps)| !(eps >= 0.0 && eps < rho)) {
            return bad(format!("annuli need 0 <= eps < rho: {:?}", self.annuli));
        }
        if !(self.neck_p > 1.0 && self.neck_p < 2.0) {
            return bad(format!("neck_p = {} not in (1, 2)", self.neck_p));
        }
        if !(self.event_r_max > 0.0 && self.eta_x_max > 0.0 && self.expansion_delta > 0.0) {
            return bad("event_r_max, eta_x_max and expansion_delta must be positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusRow {
    pub rho: f64,
    pub eps: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub name: String,
    pub parameter: f64,
    pub provenance: Provenance,
    pub u0: f64,
    pub r_k: f64,
    pub eps_k: f64,
    pub beta: Option<f64>,
    pub events: ThetaArrays,
    pub theta: Option<ThetaRatios>,
    pub neck: Option<NeckReport>,
    pub neck_error: Option<String>,
    pub curvature: Vec<QuantRow>,
    pub annulus: Vec<AnnulusRow>,
    pub expansion: Option<ExpansionChecks>,
    /// `sup |η_k − η|` on `[0, eta_x_max]`.
    pub eta_distance: Option<f64>,
    pub case: CaseReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyTrends {
    pub u0_increasing: bool,
    pub eta_distance_decreasing: Option<bool>,
    pub beta_theta2_sq: Option<TrendCheck>,
    pub beta_theta4_4th: Option<TrendCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub constants: Constants,
    pub options: AnalysisOptions,
    pub members: Vec<MemberReport>,
    pub label: CaseLabel,
    pub trends: FamilyTrends,
    pub excess: Option<ExcessFit>,
    pub excess_error: Option<String>,
}

fn eta_distance<P: RadialProfile + ?Sized>(u: &P, x_max: f64) -> Option<f64> {
    let rk = concentration_radius(u.u0());
    if !(rk * x_max <= u.support()) {
        return None;
    }
    let eta = Bubble::spherical();
    let d = (0..=400)
        .map(|i| {
            let x = x_max * i as f64 / 400.0;
            (u.value(rk * x) + rk.ln() - eta.value(x)).abs()
        })
        .fold(0.0, f64::max);
    d.is_finite().then_some(d)
}

fn member_events(m: &Member, opts: &AnalysisOptions) -> EventLog {
    let rk = concentration_radius(m.u0());
    let hi = opts.event_r_max.min(m.profile.support());
    let lo = (1e-3 * rk).min(1e-3 * hi);
    detect_events(&*m.profile, lo, hi, opts.event_samples)
}

/// All diagnostics for one member.
pub fn analyze_member(m: &Member, opts: &AnalysisOptions) -> Result<MemberReport, LabError> {
    let u = &*m.profile;
    let u0 = u.u0();
    if !u0.is_finite() {
        return Err(LabError::InvalidInput(format!("{}: u(0) = {u0}", m.name)));
    }
    let events = member_events(m, opts);
    let case = classify_case(u, &m.v, &events, &opts.classify)?;
    let beta = case.evidence.beta.map(|b| b.beta);
    let (neck, neck_error) = match neck_analysis(u, opts.neck_p, events.theta1(), opts.neck_bound) {
        Ok(n) => (Some(n), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let deltas: Vec<f64> = opts
        .deltas
        .iter()
        .copied()
        .filter(|d| *d <= u.support())
        .collect();
    let curvature = quantization_check(&m.v, u, &deltas)?;
    let annulus = opts
        .annuli
        .iter()
        .filter(|(rho, eps)| rho + eps <= u.support())
        .map(|&(rho, eps)| {
            Ok(AnnulusRow {
                rho,
                eps,
                mass: annulus_mass(&m.v, u, rho, eps)?,
            })
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    Ok(MemberReport {
        name: m.name.clone(),
        parameter: m.parameter,
        provenance: m.provenance,
        u0,
        r_k: concentration_radius(u0),
        eps_k: eps_k(u0),
        beta,
        events: events.theta_arrays(),
        theta: beta.map(|b| theta_ratios(&events, b)),
        neck,
        neck_error,
        curvature,
        annulus,
        expansion: beta.map(|b| expansion_checks(u, b, opts.expansion_delta, events.theta3())),
        eta_distance: eta_distance(u, opts.eta_x_max),
        case,
    })
}

fn trends(members: &[MemberReport], tol: f64) -> FamilyTrends {
    let u0s: Vec<f64> = members.iter().map(|m| m.u0).collect();
    let dist: Option<Vec<f64>> = members.iter().map(|m| m.eta_distance).collect();
    let ratio = |key: &str| -> Option<Vec<f64>> {
        members
            .iter()
            .map(|m| m.theta.as_ref().and_then(|t| t.get(key)))
            .collect()
    };
    FamilyTrends {
        u0_increasing: increasing(&u0s),
        eta_distance_decreasing: dist.map(|d| decreasing(&d)),
        beta_theta2_sq: ratio("beta_theta2_sq").and_then(|v| trend_to(&v, BETA_THETA2_SQ_LIMIT, tol)),
        beta_theta4_4th: ratio("beta_theta4_4th")
            .and_then(|v| trend_to(&v, BETA_THETA4_4TH_LIMIT, tol)),
    }
}

/// Analyze every member in parallel and assemble the family report.
pub fn analyze_family(family: &BlowupFamily, opts: &AnalysisOptions) -> Result<FamilyReport, LabError> {
    opts.validate()?;
    if family.is_empty() {
        return Err(LabError::InsufficientFamily(0));
    }
    let members = family
        .members
        .par_iter()
        .map(|m| analyze_member(m, opts))
        .collect::<Result<Vec<_>, LabError>>()?;
    let evidence: Vec<_> = members.iter().map(|m| m.case.evidence.clone()).collect();
    let (excess, excess_error) = match opts.excess_delta {
        Some(delta) => {
            let pairs: Vec<_> = family
                .members
                .iter()
                .map(|m| (m.profile.clone(), m.v.clone()))
                .collect();
            match curvature_excess_slope(&pairs, delta) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            }
        }
        None => (None, None),
    };
    Ok(FamilyReport {
        family: family.name.clone(),
        constants: Constants::get(),
        options: opts.clone(),
        trends: trends(&members, opts.trend_tolerance),
        label: classify_family(&evidence),
        members,
        excess,
        excess_error,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:.17e}"))
}

impl FamilyReport {
    pub fn write_json<W: Write>(&self, w: W) -> Result<(), LabError> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    /// One row per member; absent values are empty cells.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), LabError> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut head: Vec<String> = [
            "name", "parameter", "u0", "r_k", "eps_k", "beta", "theta1", "theta1_tilde", "theta2",
            "theta3", "theta4", "t_k",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        head.extend(self.options.deltas.iter().map(|d| format!("curv_delta_{d}")));
        head.extend(
            self.options
                .annuli
                .iter()
                .map(|(rho, eps)| format!("annulus_{rho}_{eps}")),
        );
        head.push("case".into());
        wtr.write_record(&head)?;
        for m in &self.members {
            let first = |v: &Vec<f64>| v.first().copied();
            let mut rec = vec![
                m.name.clone(),
                format!("{}", m.parameter),
                opt(Some(m.u0)),
                opt(Some(m.r_k)),
                opt(Some(m.eps_k)),
                opt(m.beta),
                opt(first(&m.events.theta1)),
                opt(first(&m.events.theta1_tilde)),
                opt(first(&m.events.theta2)),
                opt(first(&m.events.theta3)),
                opt(first(&m.events.theta4)),
                opt(m.neck.as_ref().map(|n| n.t_k)),
            ];
            rec.extend(self.options.deltas.iter().map(|d| {
                opt(m.curvature.iter().find(|q| q.delta == *d).map(|q| q.curvature))
            }));
            rec.extend(self.options.annuli.iter().map(|&(rho, eps)| {
                opt(m
                    .annulus
                    .iter()
                    .find(|a| a.rho == rho && a.eps == eps)
                    .map(|a| a.mass))
            }));
            rec.push(m.case.label.to_string());
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }
}
