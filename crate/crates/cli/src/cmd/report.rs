//! Verify the manifest and gather every recorded check.

use crate::checks::{Check, CheckReport};
use crate::error::CliError;
use crate::output::{sha256_hex, Manifest, OutputDir, MANIFEST};
use serde::Serialize;
use std::path::Path;

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub path: String,
    pub expected: String,
    /// Empty when the file is missing.
    pub found: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub artifacts: usize,
    pub mismatches: Vec<Mismatch>,
    pub commands: Vec<CheckReport>,
    pub failing: Vec<String>,
}

pub fn collect(dir: &Path) -> Result<Report, CliError> {
    if !dir.join(MANIFEST).exists() {
        return Err(CliError::Usage(format!("no {MANIFEST} in {}", dir.display())));
    }
    let m = Manifest::read(dir)?;
    let mut mismatches = Vec::new();
    let mut commands = Vec::new();
    for (name, a) in &m.artifacts {
        let found = match std::fs::read(dir.join(name)) {
            Ok(bytes) => {
                let h = sha256_hex(&bytes);
                if name.ends_with("_checks.json") && h == a.sha256 {
                    commands.push(serde_json::from_slice::<CheckReport>(&bytes)?);
                }
                h
            }
            Err(_) => String::new(),
        };
        if found != a.sha256 {
            mismatches.push(Mismatch {
                path: name.clone(),
                expected: a.sha256.clone(),
                found,
            });
        }
    }
    let failing = commands
        .iter()
        .flat_map(|c| c.failing().into_iter().map(move |id| format!("{}:{id}", c.command)))
        .collect();
    Ok(Report {
        artifacts: m.artifacts.len(),
        mismatches,
        commands,
        failing,
    })
}

pub fn run(out_dir: &Path) -> Result<Report, CliError> {
    let rep = collect(out_dir)?;
    let mut out = OutputDir::create(out_dir, "report")?;
    out.write_json("report.json", &rep)?;
    out.finish()?;
    let mut bad: Vec<String> = rep.mismatches.iter().map(|m| format!("checksum:{}", m.path)).collect();
    bad.extend(rep.failing.iter().cloned());
    if bad.is_empty() {
        Ok(rep)
    } else {
        Err(CliError::ChecksFailed(bad))
    }
}

/// One line per check, for the terminal.
pub fn summarize(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                format!("{tag} {} value={:.3e} limit={:.3e}", c.id, c.value, c.limit)
            } else {
                format!("{tag} {} value={:.3e} limit={:.3e} ({})", c.id, c.value, c.limit, c.detail)
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}
