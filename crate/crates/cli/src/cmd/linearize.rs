//! The linearized operator at `η`: kernel element, identity draws and ψ₀.

use super::{conclude, Context};
use crate::checks::{Check, CheckReport};
use crate::error::CliError;
use crate::output::OutputDir;
use linear_lab::{
    asymptotic_table_check, kernel_alpha_integral, kernel_operator_residual, psi0_profile,
    solve_linearized,
};
use radial_core::constants::{GAMMA6, LAMBDA1};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::io::Write;

/// Largest `|kernel_operator_residual|` on `[0, 20]`.
pub fn psi_residual_max() -> f64 {
    (0..=2000)
        .map(|i| kernel_operator_residual(0.01 * i as f64).abs())
        .fold(0.0, f64::max)
}

pub fn run(ctx: &Context) -> Result<CheckReport, CliError> {
    ctx.cfg.validate_linearize()?;
    let l = &ctx.cfg.linearize;
    let t = &ctx.cfg.tolerances;
    let mut out = OutputDir::create(&ctx.out, "linearize")?;
    let mut checks = Vec::new();

    checks.push(Check::at_most("linearize.psi_residual", psi_residual_max(), t.psi_residual));
    let psi_alpha = kernel_alpha_integral().map_err(|e| CliError::run("kernel alpha", e))?;
    checks.push(Check::at_most("linearize.psi_alpha", psi_alpha.abs(), t.psi_alpha));

    let mut rng = StdRng::seed_from_u64(ctx.cfg.seed);
    let mut draws = Vec::new();
    writeln!(
        draws,
        "index,lap_psi0,bilap_psi0,a,b,d,alpha,alpha_integral,identity,alpha_mismatch,fit_residual,condition"
    )?;
    for i in 0..l.draws {
        let lap = rng.gen_range(l.lap_range.0..l.lap_range.1);
        let bilap = rng.gen_range(l.bilap_range.0..l.bilap_range.1);
        let s = solve_linearized(lap, bilap, l.r_max).map_err(|e| CliError::run("linearized solve", e))?;
        let f = &s.fit;
        writeln!(
            draws,
            "{i},{lap:.17e},{bilap:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.6e},{:.6e},{:.6e},{:.6e}",
            f.a,
            f.b,
            f.d,
            f.alpha,
            s.alpha_integral,
            s.identity_residual(),
            s.alpha_mismatch(),
            s.fit_residual,
            s.condition
        )?;
        checks.push(Check::at_most(
            &format!("linearize.identity.{i}"),
            s.identity_residual(),
            t.alpha_identity,
        ));
    }
    out.write("linearize_draws.csv", &draws)?;

    let psi0 = psi0_profile(l.r_max).map_err(|e| CliError::run("psi0", e))?;
    out.write_with("linearize_psi0.json", |w| {
        psi0.write_json(w).map_err(|e| CliError::run("psi0 json", e))
    })?;
    out.write_with("linearize_psi0.csv", |w| {
        psi0.write_csv(w).map_err(|e| CliError::run("psi0 csv", e))
    })?;
    let table = asymptotic_table_check(&psi0.psi, &psi0.fit, &l.table_radii);
    out.write_json("linearize_table.json", &table)?;

    let slope = GAMMA6 * psi0.alpha_integral;
    let ratio = slope / (24.0 * LAMBDA1);
    out.write_json(
        "linearize_summary.json",
        &serde_json::json!({
            "psi_residual_max": psi_residual_max(),
            "psi_alpha_integral": psi_alpha,
            "psi0": { "a": psi0.fit.a, "b": psi0.fit.b, "alpha": psi0.fit.alpha,
                      "alpha_integral": psi0.alpha_integral },
            "excess_slope": slope,
            "excess_slope_target": 24.0 * LAMBDA1,
            "excess_slope_ratio": ratio,
            "table_max": table.max(),
        }),
    )?;
    let norm = (psi0.fit.a - 8.0).abs() + psi0.fit.b.abs();
    checks.push(Check::at_most("linearize.psi0.normalization", norm, 1e-6));
    checks.push(Check::at_most(
        "linearize.psi0.identity",
        psi0.identity_residual(),
        t.alpha_identity,
    ));
    checks.push(Check::at_most("linearize.psi0.slope", (ratio - 1.0).abs(), t.psi0_slope));

    let tol = serde_json::json!({
        "psi_residual": t.psi_residual,
        "psi_alpha": t.psi_alpha,
        "alpha_identity": t.alpha_identity,
        "psi0_slope": t.psi0_slope,
        "r_max": l.r_max,
    });
    conclude(ctx, out, "linearize", tol, checks)
}
