//! The analytic and constructed example families.

use super::{conclude, Context};
use crate::checks::{Check, CheckReport};
use crate::error::CliError;
use crate::output::OutputDir;
use blowup_lab::{analyze_family, example1a, example1b, example2, example3, hybrid_family, BlowupFamily};

fn build(ctx: &Context) -> Result<BlowupFamily, CliError> {
    let f = &ctx.cfg.family;
    let fam = match f.example.as_str() {
        "1a" => example1a(&f.params),
        "1b" => example1b(&f.params),
        "2" => {
            let cont = super::hybrid::continuation(ctx)?;
            if let Some((i, e)) = cont.failure {
                return Err(CliError::run("example 2 base family", format!("lambda index {i}: {e}")));
            }
            let base = hybrid_family(&cont.solutions, ctx.cfg.hybrid.trajectory_r_max)
                .map_err(|e| CliError::run("example 2 base family", e))?;
            example2(&base, &f.params)
        }
        "3" => example3(&f.example3, &f.params),
        other => return Err(CliError::Usage(format!("unknown example id {other:?}"))),
    };
    fam.map_err(|e| CliError::run(&format!("example {}", f.example), e))
}

pub fn run(ctx: &Context) -> Result<CheckReport, CliError> {
    ctx.cfg.validate_family()?;
    let id = ctx.cfg.family.example.clone();
    let fam = build(ctx)?;
    let rep = analyze_family(&fam, &ctx.cfg.analysis).map_err(|e| CliError::run("analysis", e))?;
    let command = format!("family_{id}");
    let mut out = OutputDir::create(&ctx.out, &command)?;
    out.write_json(&format!("family_{id}.json"), &rep)?;
    out.write_with(&format!("family_{id}.csv"), |w| {
        rep.write_csv(w).map_err(|e| CliError::run("family csv", e))
    })?;
    let mut checks = vec![Check::holds("family.label", true, rep.label.to_string())];
    if let Some(expect) = ctx.cfg.family.expect {
        checks.push(Check::holds(
            "family.case",
            rep.label == expect,
            format!("expected {expect}, found {}", rep.label),
        ));
    }
    let tol = serde_json::json!({ "analysis": ctx.cfg.analysis });
    conclude(ctx, out, &command, tol, checks)
}
