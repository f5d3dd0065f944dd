//! Families of radial profiles: the analytic examples, solver output and synthetic oracles.

use crate::error::LabError;
use crate::rescale::{concentration_radius, eps_k};
use entire_solver::{example3_solve, EntireSolution, Example3Config};
use linear_lab::LinearizedSolution;
use ode_shooter::ivp::{integrate_ivp, IvpSpec};
use radial_core::profiles::{synthetic_hybrid, Bubble, Rescaled};
use radial_core::{JetState, RadialProfile, VSpec};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    AnalyticExample,
    EntireSolver,
    External,
}

#[derive(Clone)]
pub struct Member {
    pub name: String,
    /// The family parameter (k, λ, ρ, u(0), …).
    pub parameter: f64,
    pub profile: Arc<dyn RadialProfile>,
    pub v: VSpec,
    pub provenance: Provenance,
}

impl std::fmt::Debug for Member {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Member")
            .field("name", &self.name)
            .field("parameter", &self.parameter)
            .field("u0", &self.profile.u0())
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl Member {
    pub fn new<P: RadialProfile + 'static>(
        name: impl Into<String>,
        parameter: f64,
        profile: P,
        v: VSpec,
        provenance: Provenance,
    ) -> Self {
        Member {
            name: name.into(),
            parameter,
            profile: Arc::new(profile),
            v,
            provenance,
        }
    }

    pub fn u0(&self) -> f64 {
        self.profile.u0()
    }
}

/// Members in sequence order; the last one is the most advanced.
#[derive(Clone, Debug)]
pub struct BlowupFamily {
    pub name: String,
    pub members: Vec<Member>,
}

impl BlowupFamily {
    pub fn new(name: impl Into<String>, members: Vec<Member>) -> Self {
        BlowupFamily {
            name: name.into(),
            members,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The same family with every member replaced by `u(λx) + log λ`.
    pub fn rescaled(&self, lambda: f64) -> Self {
        let members = self
            .members
            .iter()
            .map(|m| Member {
                name: format!("{}@{lambda}", m.name),
                parameter: m.parameter,
                profile: Arc::new(Rescaled {
                    inner: m.profile.clone(),
                    lambda,
                }),
                v: m.v.clone(),
                provenance: m.provenance,
            })
            .collect();
        BlowupFamily::new(format!("{}@{lambda}", self.name), members)
    }
}

fn check_params(ps: &[f64], what: &str) -> Result<(), LabError> {
    if ps.is_empty() {
        return Err(LabError::InvalidInput(format!("empty {what} list")));
    }
    if let Some(p) = ps.iter().find(|p| !(**p > 0.0 && p.is_finite())) {
        return Err(LabError::InvalidInput(format!("{what} = {p}")));
    }
    Ok(())
}

/// `η(x/k) − log k`: flattening bubbles.
pub fn example1a(ks: &[f64]) -> Result<BlowupFamily, LabError> {
    check_params(ks, "k")?;
    let members = ks
        .iter()
        .map(|&k| {
            Member::new(
                format!("1a-k{k}"),
                k,
                Bubble { scale: k },
                VSpec::standard(),
                Provenance::AnalyticExample,
            )
        })
        .collect();
    Ok(BlowupFamily::new("example-1a", members))
}

/// `η(kx) + log k`: concentrating bubbles.
pub fn example1b(ks: &[f64]) -> Result<BlowupFamily, LabError> {
    check_params(ks, "k")?;
    let members = ks
        .iter()
        .map(|&k| {
            Member::new(
                format!("1b-k{k}"),
                k,
                Bubble { scale: 1.0 / k },
                VSpec::standard(),
                Provenance::AnalyticExample,
            )
        })
        .collect();
    Ok(BlowupFamily::new("example-1b", members))
}

/// `u_k(ρ_k x) + log ρ_k` for a base family and user-chosen `ρ_k`.
pub fn example2(base: &BlowupFamily, rhos: &[f64]) -> Result<BlowupFamily, LabError> {
    check_params(rhos, "rho")?;
    if rhos.len() != base.len() {
        return Err(LabError::InvalidInput(format!(
            "{} radii for {} members",
            rhos.len(),
            base.len()
        )));
    }
    let members = base
        .members
        .iter()
        .zip(rhos)
        .map(|(m, &rho)| Member {
            name: format!("2-{}-rho{rho}", m.name),
            parameter: rho,
            profile: Arc::new(Rescaled {
                inner: m.profile.clone(),
                lambda: rho,
            }),
            v: m.v.clone(),
            provenance: m.provenance,
        })
        .collect();
    Ok(BlowupFamily::new("example-2", members))
}

/// `v_k(β_k x) + log β_k` from the variable-coefficient fixed point, one member per `k`.
pub fn example3(base: &Example3Config, ks: &[f64]) -> Result<BlowupFamily, LabError> {
    check_params(ks, "k")?;
    let mut members = Vec::new();
    for &k in ks {
        let cfg = Example3Config { k, ..base.clone() };
        let s = example3_solve(&cfg)?;
        let spec = IvpSpec::new(s.u0, s.lap_u0, s.bilap_u0, VSpec::standard(), cfg.grid.r_max);
        let traj = integrate_ivp(&spec)?;
        members.push(Member::new(
            format!("3-k{k}"),
            k,
            Rescaled {
                inner: traj,
                lambda: s.beta,
            },
            VSpec::standard(),
            Provenance::EntireSolver,
        ));
    }
    Ok(BlowupFamily::new("example-3", members))
}

/// Re-integrated entire solutions, indexed by `λ`.
pub fn hybrid_family(solutions: &[EntireSolution], r_max: f64) -> Result<BlowupFamily, LabError> {
    let mut members = Vec::new();
    for s in solutions {
        let traj = s.trajectory(r_max)?;
        members.push(Member::new(
            format!("hybrid-lambda{:.6}", s.lambda),
            s.lambda,
            traj,
            s.vspec.clone(),
            Provenance::EntireSolver,
        ));
    }
    Ok(BlowupFamily::new("hybrid", members))
}

/// `η̄_k + u(0)(φ + 1)` for each height.
pub fn synthetic_family(u0s: &[f64]) -> Result<BlowupFamily, LabError> {
    check_params(u0s, "u0")?;
    let members = u0s
        .iter()
        .map(|&u0| {
            Member::new(
                format!("synthetic-u{u0}"),
                u0,
                synthetic_hybrid(u0, u0),
                VSpec::standard(),
                Provenance::AnalyticExample,
            )
        })
        .collect();
    Ok(BlowupFamily::new("synthetic", members))
}

/// ψ₀ from its solve on `[0, r_max]`, continued by the far-field fit.
#[derive(Clone, Debug)]
pub struct Psi0Profile(pub Arc<LinearizedSolution>);

impl RadialProfile for Psi0Profile {
    fn jet(&self, r: f64) -> JetState {
        let s = &self.0;
        if r <= s.psi.r_end() {
            s.psi.jet(r)
        } else {
            let mut j = s.fit.jet(r);
            j.w[0] += s.psi.value(s.r_max) - s.fit.value(s.r_max);
            j
        }
    }
}

/// `η + ε ψ₀` in concentration variables.
#[derive(Clone, Debug)]
pub struct PerturbedBubble {
    pub eps: f64,
    pub psi0: Psi0Profile,
}

impl RadialProfile for PerturbedBubble {
    fn jet(&self, x: f64) -> JetState {
        Bubble::spherical()
            .jet(x)
            .add(&self.psi0.jet(x).scaled(self.eps))
    }
}

/// `η_k(r/r_k) − log r_k` with `η_k = η + ε_k ψ₀`, `ε_k = u(0)e^{−2u(0)}`.
pub fn synthetic_excess_family(
    u0s: &[f64],
    psi0: Arc<LinearizedSolution>,
) -> Result<BlowupFamily, LabError> {
    check_params(u0s, "u0")?;
    let members = u0s
        .iter()
        .map(|&u0| {
            let inner = PerturbedBubble {
                eps: eps_k(u0),
                psi0: Psi0Profile(psi0.clone()),
            };
            Member::new(
                format!("excess-u{u0}"),
                u0,
                Rescaled {
                    inner,
                    lambda: 1.0 / concentration_radius(u0),
                },
                VSpec::standard(),
                Provenance::AnalyticExample,
            )
        })
        .collect();
    Ok(BlowupFamily::new("synthetic-excess", members))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_heights() {
        let f = example1b(&[5.0, 20.0]).unwrap();
        assert!((f.members[1].u0() - (2.0f64.ln() + 20f64.ln())).abs() < 1e-14);
        let g = example1a(&[4.0]).unwrap();
        assert!((g.members[0].u0() - (2.0f64.ln() - 4f64.ln())).abs() < 1e-14);
        assert!(example1a(&[]).is_err());
    }

    #[test]
    fn rescaling_shifts_heights() {
        let f = example1b(&[10.0]).unwrap().rescaled(2.0);
        assert!((f.members[0].u0() - (20f64.ln() + 2f64.ln())).abs() < 1e-14);
    }
}
