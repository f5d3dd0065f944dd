//! Diagnostics for externally produced trajectories.

use super::{conclude, Context};
use crate::checks::CheckReport;
use crate::error::CliError;
use crate::output::OutputDir;
use blowup_lab::{analyze_family, BlowupFamily, Member, Provenance, TabulatedProfile};
use std::path::PathBuf;

/// Read `inputs` (or the configured list when empty) as one family.
pub fn load_family(ctx: &Context, inputs: &[PathBuf]) -> Result<BlowupFamily, CliError> {
    let paths = if inputs.is_empty() {
        &ctx.cfg.analyze.inputs
    } else {
        inputs
    };
    if paths.is_empty() {
        return Err(CliError::Usage("analyze needs at least one trajectory CSV".into()));
    }
    let mut members = Vec::with_capacity(paths.len());
    for (i, p) in paths.iter().enumerate() {
        let prof = TabulatedProfile::read_csv_path(p)
            .map_err(|e| CliError::run(&p.display().to_string(), e))?;
        let name = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| format!("member{i}"));
        members.push(Member::new(name, i as f64, prof, ctx.cfg.v.clone(), Provenance::External));
    }
    Ok(BlowupFamily::new(ctx.cfg.analyze.name.clone(), members))
}

pub fn run(ctx: &Context, inputs: &[PathBuf]) -> Result<CheckReport, CliError> {
    ctx.cfg.validate_analysis()?;
    let name = ctx.cfg.analyze.name.clone();
    if name.is_empty() || name.contains(['/', '\\']) {
        return Err(CliError::Config(format!("analyze.name {name:?} is not a file stem")));
    }
    let fam = load_family(ctx, inputs)?;
    let rep = analyze_family(&fam, &ctx.cfg.analysis).map_err(|e| CliError::run("analysis", e))?;
    let command = format!("analyze_{name}");
    let mut out = OutputDir::create(&ctx.out, &command)?;
    out.write_json(&format!("{command}.json"), &rep)?;
    out.write_with(&format!("{command}.csv"), |w| {
        rep.write_csv(w).map_err(|e| CliError::run("analysis csv", e))
    })?;
    let tol = serde_json::json!({ "analysis": ctx.cfg.analysis });
    conclude(ctx, out, &command, tol, Vec::new())
}
