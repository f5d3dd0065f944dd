//! Entire solutions along decreasing λ and their blow-up diagnostics.

use super::{conclude, Context};
use crate::checks::{Check, CheckReport};
use crate::error::CliError;
use crate::output::OutputDir;
use blowup_lab::{analyze_family, hybrid_family, FamilyReport};
use entire_solver::{lambda_continuation, pohozaev_residual, Continuation};
use radial_core::constants::LAMBDA1;
use std::io::Write;

/// Run the configured continuation.
pub fn continuation(ctx: &Context) -> Result<Continuation, CliError> {
    let h = &ctx.cfg.hybrid;
    lambda_continuation(&ctx.cfg.v, &h.solver(ctx.tol_scale), &h.lambdas)
        .map_err(|e| CliError::run("continuation", e))
}

/// Continuation, then the family report on the re-integrated solutions.
pub fn family_report(ctx: &Context, cont: &Continuation) -> Result<FamilyReport, CliError> {
    let fam = hybrid_family(&cont.solutions, ctx.cfg.hybrid.trajectory_r_max)
        .map_err(|e| CliError::run("hybrid family", e))?;
    analyze_family(&fam, &ctx.cfg.analysis).map_err(|e| CliError::run("analysis", e))
}

pub fn run(ctx: &Context) -> Result<CheckReport, CliError> {
    ctx.cfg.validate_hybrid()?;
    let h = &ctx.cfg.hybrid;
    let t = &ctx.cfg.tolerances;
    let cont = continuation(ctx)?;
    let mut out = OutputDir::create(&ctx.out, "hybrid")?;
    let mut checks = Vec::new();

    let mut table = Vec::new();
    writeln!(
        table,
        "index,lambda,u0,lambda_lap_u0,lap_u0,bilap_u0,c,c_tilde,Lambda_achieved,method,sweeps,pohozaev"
    )?;
    for (i, s) in cont.solutions.iter().enumerate() {
        out.write_with(&format!("hybrid_solution_{i}.json"), |w| {
            s.write_json(w).map_err(|e| CliError::run("solution json", e))
        })?;
        out.write_with(&format!("hybrid_solution_{i}.csv"), |w| {
            s.write_csv(w).map_err(|e| CliError::run("solution csv", e))
        })?;
        let (poh, check) = match pohozaev_residual(s, &ctx.cfg.v) {
            Ok(p) => {
                let p = p.abs() / LAMBDA1;
                (p, Check::at_most(&format!("hybrid.pohozaev.{i}"), p, t.pohozaev))
            }
            Err(e) => (
                f64::NAN,
                Check::holds(&format!("hybrid.pohozaev.{i}"), false, e.to_string()),
            ),
        };
        checks.push(check);
        writeln!(
            table,
            "{i},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:?},{},{poh:.6e}",
            s.lambda,
            s.u0,
            s.lambda * s.lap_v0,
            s.lap_v0,
            s.bilap_u0,
            s.c,
            s.c_tilde(),
            s.total_achieved,
            s.method,
            s.sweeps
        )?;
    }
    out.write("hybrid_continuation.csv", &table)?;

    let detail = cont
        .failure
        .as_ref()
        .map(|(i, e)| format!("lambda index {i}: {e}"))
        .unwrap_or_default();
    checks.push(Check::holds("hybrid.continuation", cont.failure.is_none(), detail));

    if !cont.solutions.is_empty() {
        let rep = family_report(ctx, &cont)?;
        out.write_json("hybrid_family.json", &rep)?;
        out.write_with("hybrid_family.csv", |w| {
            rep.write_csv(w).map_err(|e| CliError::run("family csv", e))
        })?;
        if let Some(expect) = h.expect {
            let last = rep.members.last().map(|m| m.case.label);
            checks.push(Check::holds(
                "hybrid.case",
                last == Some(expect),
                format!(
                    "expected {expect} at the smallest lambda, found {}",
                    last.map_or("none".into(), |l| l.to_string())
                ),
            ));
        }
    }
    let tol = serde_json::json!({
        "fixed_point_tol": h.tol * ctx.tol_scale,
        "pohozaev": t.pohozaev,
    });
    conclude(ctx, out, "hybrid", tol, checks)
}
