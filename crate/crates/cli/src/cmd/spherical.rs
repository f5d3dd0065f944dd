//! The spherical solution `η` from its origin data.

use super::{conclude, Context};
use crate::checks::{Check, CheckReport};
use crate::error::CliError;
use crate::output::OutputDir;
use ode_shooter::{integrate_ivp, IvpSpec, Trajectory};
use radial_core::constants::{LAMBDA1, OMEGA5};
use radial_core::ops::closed_form_defint;
use radial_core::profiles::Bubble;
use radial_core::RadialProfile;
use serde::Serialize;
use std::io::Write;

/// `|Δ³η(0)|`, the scale of the operator residual.
const LAP3_SCALE: f64 = 7680.0;

#[derive(Debug, Serialize)]
struct Summary {
    r_end: f64,
    status: String,
    sup_error: f64,
    curvature_r_max: f64,
    #[serde(rename = "Lambda1")]
    lambda1: f64,
    curvature_rel_error: f64,
    operator_residual_max: f64,
}

/// `|Δ³u + 120e^{6u}| / 7680`, with `Δ³u` from central differences of `(Δ²u)'`.
pub fn operator_residual(traj: &Trajectory, r: f64) -> f64 {
    let h = 1e-3 * r.min(1.0);
    let f = |x: f64| traj.jet(x).dbilap();
    let d1 = (f(r + h) - f(r - h)) / (2.0 * h);
    let lap3 = d1 + 5.0 * f(r) / r;
    (lap3 + 120.0 * (6.0 * traj.value(r)).exp()).abs() / LAP3_SCALE
}

pub fn run(ctx: &Context) -> Result<CheckReport, CliError> {
    ctx.cfg.validate_spherical()?;
    let s = &ctx.cfg.spherical;
    let spec = IvpSpec::spherical(s.r_max).with_tol(ctx.ivp_tolerances());
    let traj = integrate_ivp(&spec).map_err(|e| CliError::run("spherical", e))?;
    let mut out = OutputDir::create(&ctx.out, "spherical")?;
    out.write_with("spherical_trajectory.csv", |w| {
        traj.write_csv(w).map_err(|e| CliError::run("trajectory csv", e))
    })?;

    let eta = Bubble::spherical();
    let mut sup_error: f64 = 0.0;
    let mut residual_max: f64 = 0.0;
    let mut prof = Vec::new();
    writeln!(prof, "r,u,eta,u_err,lap_err,bilap_err,residual")?;
    for i in 0..s.samples {
        let r = s.compare_max * i as f64 / (s.samples - 1) as f64;
        let (a, b) = (traj.jet(r), eta.jet(r));
        let err = (a.u() - b.u()).abs();
        let res = if r > 0.0 { operator_residual(&traj, r) } else { 0.0 };
        sup_error = sup_error.max(err);
        residual_max = residual_max.max(res);
        writeln!(
            prof,
            "{r:.17e},{:.17e},{:.17e},{err:.6e},{:.6e},{:.6e},{res:.6e}",
            a.u(),
            b.u(),
            (a.lap() - b.lap()).abs(),
            (a.bilap() - b.bilap()).abs()
        )?;
    }
    out.write("spherical_profile.csv", &prof)?;

    let mut curv = Vec::new();
    writeln!(curv, "r,curvature,closed_form,abs_diff,rel_diff")?;
    for &r in &s.curvature_radii {
        let num = traj.mass(r).map_err(|e| CliError::run("curvature", e))?;
        let exact = 7680.0 * OMEGA5 * closed_form_defint(r);
        writeln!(
            curv,
            "{r:.17e},{num:.17e},{exact:.17e},{:.6e},{:.6e}",
            (num - exact).abs(),
            ((num - exact) / exact).abs()
        )?;
    }
    writeln!(curv, "inf,,{LAMBDA1:.17e},,")?;
    out.write("spherical_curvature.csv", &curv)?;

    let c_end = traj.mass(traj.r_end()).unwrap_or(f64::NAN);
    let summary = Summary {
        r_end: traj.r_end(),
        status: format!("{:?}", traj.status),
        sup_error,
        curvature_r_max: c_end,
        lambda1: LAMBDA1,
        curvature_rel_error: ((c_end - LAMBDA1) / LAMBDA1).abs(),
        operator_residual_max: residual_max,
    };
    out.write_json("spherical_summary.json", &summary)?;

    let t = &ctx.cfg.tolerances;
    let checks = vec![
        Check::holds("spherical.complete", traj.status.is_complete(), summary.status.clone()),
        Check::at_most("spherical.sup_error", sup_error, t.spherical_sup),
        Check::at_most("spherical.curvature", summary.curvature_rel_error, t.spherical_curvature),
        Check::at_most("spherical.operator_residual", residual_max, t.operator_residual),
    ];
    let tol = serde_json::json!({
        "ivp": ctx.ivp_tolerances(),
        "spherical_sup": t.spherical_sup,
        "spherical_curvature": t.spherical_curvature,
        "operator_residual": t.operator_residual,
    });
    conclude(ctx, out, "spherical", tol, checks)
}
