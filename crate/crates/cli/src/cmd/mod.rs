//! One module per subcommand.

pub mod analyze;
pub mod family;
pub mod hybrid;
pub mod linearize;
pub mod report;
pub mod spherical;

use crate::checks::{Check, CheckReport};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::OutputDir;
use std::path::PathBuf;

/// What every command receives.
#[derive(Clone, Debug)]
pub struct Context {
    pub cfg: RunConfig,
    pub out: PathBuf,
    /// Multiplies integrator and solver tolerances.
    pub tol_scale: f64,
}

impl Context {
    pub fn new(cfg: RunConfig, out: PathBuf, tol_scale: f64) -> Result<Self, CliError> {
        if !(tol_scale > 0.0 && tol_scale.is_finite()) {
            return Err(CliError::Usage(format!("--tol-scale {tol_scale} must be positive")));
        }
        Ok(Context { cfg, out, tol_scale })
    }

    pub fn ivp_tolerances(&self) -> ode_shooter::Tolerances {
        ode_shooter::Tolerances::default().scaled(self.tol_scale)
    }
}

/// Record the checks, finish the manifest, and turn failures into an error.
pub(crate) fn conclude(
    ctx: &Context,
    mut out: OutputDir,
    command: &str,
    tolerances: serde_json::Value,
    checks: Vec<Check>,
) -> Result<CheckReport, CliError> {
    let report = CheckReport {
        command: command.to_string(),
        tol_scale: ctx.tol_scale,
        tolerances,
        checks,
    };
    out.write_json(&format!("{command}_checks.json"), &report)?;
    out.finish()?;
    let failing = report.failing();
    if failing.is_empty() {
        Ok(report)
    } else {
        Err(CliError::ChecksFailed(failing))
    }
}
