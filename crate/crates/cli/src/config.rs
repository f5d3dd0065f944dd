//! TOML run configuration. Every section is optional.

use crate::error::CliError;
use blowup_lab::{AnalysisOptions, CaseLabel};
use entire_solver::grid::GridSpec;
use entire_solver::{Example3Config, FixedPointConfig};
use radial_core::constants::LAMBDA1;
use radial_core::VSpec;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Seed for the random draws of `linearize`.
    pub seed: u64,
    pub v: VSpec,
    pub tolerances: CheckTolerances,
    pub spherical: SphericalConfig,
    pub family: FamilyConfig,
    pub hybrid: HybridConfig,
    pub linearize: LinearizeConfig,
    pub analyze: AnalyzeConfig,
    pub analysis: AnalysisOptions,
}

/// Pass thresholds of the checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckTolerances {
    pub spherical_sup: f64,
    pub spherical_curvature: f64,
    pub operator_residual: f64,
    pub alpha_identity: f64,
    pub psi_residual: f64,
    pub psi_alpha: f64,
    pub psi0_slope: f64,
    pub pohozaev: f64,
}

impl Default for CheckTolerances {
    fn default() -> Self {
        CheckTolerances {
            spherical_sup: 1e-6,
            spherical_curvature: 1e-6,
            operator_residual: 1e-6,
            alpha_identity: 1e-2,
            psi_residual: 1e-6,
            psi_alpha: 1e-6,
            psi0_slope: 0.05,
            pohozaev: 2e-2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SphericalConfig {
    pub r_max: f64,
    /// `u` is compared with `η` on `[0, compare_max]`.
    pub compare_max: f64,
    pub samples: usize,
    pub curvature_radii: Vec<f64>,
}

impl Default for SphericalConfig {
    fn default() -> Self {
        SphericalConfig {
            r_max: 50.0,
            compare_max: 10.0,
            samples: 1001,
            curvature_radii: vec![0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyConfig {
    /// One of `1a`, `1b`, `2`, `3`.
    pub example: String,
    /// `k` for 1a, 1b and 3; `ρ_k` for 2.
    pub params: Vec<f64>,
    pub example3: Example3Config,
    /// Family label to check against, if any.
    pub expect: Option<CaseLabel>,
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig {
            example: "1b".into(),
            params: vec![5.0, 20.0, 80.0],
            example3: Example3Config::default(),
            expect: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HybridConfig {
    /// `Λ / Λ₁`.
    #[serde(rename = "Lambda_ratio")]
    pub lambda_ratio: f64,
    /// Decreasing, each in `(0, 1/24]`.
    pub lambdas: Vec<f64>,
    pub grid: GridSpec,
    pub damping: f64,
    pub max_sweeps: usize,
    pub tol: f64,
    pub newton_fallback: bool,
    pub kernel_order: usize,
    /// Radius to which each solution is re-integrated for diagnostics.
    pub trajectory_r_max: f64,
    pub expect: Option<CaseLabel>,
}

impl Default for HybridConfig {
    fn default() -> Self {
        let fp = FixedPointConfig::default();
        HybridConfig {
            lambda_ratio: 1.5,
            lambdas: vec![1.0 / 24.0, 1.0 / 48.0, 1.0 / 96.0],
            grid: fp.grid,
            damping: fp.damping,
            max_sweeps: fp.max_sweeps,
            tol: fp.tol,
            newton_fallback: fp.newton_fallback,
            kernel_order: fp.kernel_order,
            trajectory_r_max: 3.0,
            expect: Some(CaseLabel::IV),
        }
    }
}

impl HybridConfig {
    pub fn total(&self) -> f64 {
        self.lambda_ratio * LAMBDA1
    }

    pub fn solver(&self, tol_scale: f64) -> FixedPointConfig {
        FixedPointConfig {
            total: self.total(),
            lambda: self.lambdas.first().copied().unwrap_or(1.0 / 24.0),
            damping: self.damping,
            grid: self.grid.clone(),
            max_sweeps: self.max_sweeps,
            tol: self.tol * tol_scale,
            newton_fallback: self.newton_fallback,
            kernel_order: self.kernel_order,
            ..FixedPointConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinearizeConfig {
    pub r_max: f64,
    pub draws: usize,
    /// Range of `Δψ(0)` for the random draws.
    pub lap_range: (f64, f64),
    /// Range of `Δ²ψ(0)` for the random draws.
    pub bilap_range: (f64, f64),
    pub table_radii: Vec<f64>,
}

impl Default for LinearizeConfig {
    fn default() -> Self {
        LinearizeConfig {
            r_max: 200.0,
            draws: 5,
            lap_range: (-5.0, 5.0),
            bilap_range: (-100.0, 100.0),
            table_radii: vec![12.5, 25.0, 50.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeConfig {
    /// Trajectory CSV files, one member each, in sequence order.
    pub inputs: Vec<PathBuf>,
    pub name: String,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            inputs: Vec::new(),
            name: "external".into(),
        }
    }
}

fn positive(name: &str, x: f64) -> Result<(), CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{name} = {x}, must be positive")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                Self::from_toml(&text)
            }
        }
    }

    pub fn validate_spherical(&self) -> Result<(), CliError> {
        let s = &self.spherical;
        positive("spherical.r_max", s.r_max)?;
        positive("spherical.compare_max", s.compare_max)?;
        if s.compare_max > s.r_max {
            return Err(CliError::Config("spherical.compare_max exceeds r_max".into()));
        }
        if s.samples < 2 {
            return Err(CliError::Config("spherical.samples must be at least 2".into()));
        }
        for &r in &s.curvature_radii {
            positive("spherical.curvature_radii", r)?;
            if r > s.r_max {
                return Err(CliError::Config(format!("curvature radius {r} exceeds r_max")));
            }
        }
        Ok(())
    }

    pub fn validate_family(&self) -> Result<(), CliError> {
        let f = &self.family;
        if !matches!(f.example.as_str(), "1a" | "1b" | "2" | "3") {
            return Err(CliError::Usage(format!(
                "unknown example id {:?}, expected 1a, 1b, 2 or 3",
                f.example
            )));
        }
        if f.params.is_empty() {
            return Err(CliError::Usage("family.params is empty".into()));
        }
        for &p in &f.params {
            positive("family.params", p)?;
        }
        if f.example == "2" {
            self.validate_hybrid()?;
            if f.params.len() != self.hybrid.lambdas.len() {
                return Err(CliError::Config(format!(
                    "example 2 needs one rho per hybrid lambda ({} given, {} lambdas)",
                    f.params.len(),
                    self.hybrid.lambdas.len()
                )));
            }
        }
        self.validate_analysis()
    }

    pub fn validate_hybrid(&self) -> Result<(), CliError> {
        let h = &self.hybrid;
        if !(h.lambda_ratio >= 1.0) {
            return Err(CliError::Config(format!(
                "Lambda = {} Lambda1, existence needs Lambda >= Lambda1",
                h.lambda_ratio
            )));
        }
        if h.lambdas.is_empty() {
            return Err(CliError::Usage("hybrid.lambdas is empty".into()));
        }
        if h.lambdas.iter().any(|l| !(*l > 0.0 && *l <= 1.0 / 24.0 + 1e-15)) {
            return Err(CliError::Config(format!("hybrid.lambdas outside (0, 1/24]: {:?}", h.lambdas)));
        }
        if h.lambdas.windows(2).any(|w| w[1] >= w[0]) {
            return Err(CliError::Config("hybrid.lambdas must be decreasing".into()));
        }
        positive("hybrid.trajectory_r_max", h.trajectory_r_max)?;
        h.solver(1.0)
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        self.validate_analysis()
    }

    pub fn validate_linearize(&self) -> Result<(), CliError> {
        let l = &self.linearize;
        if !(l.r_max >= 100.0) {
            return Err(CliError::Config(format!(
                "linearize.r_max = {}, need at least 100",
                l.r_max
            )));
        }
        for (name, (lo, hi)) in [("lap_range", l.lap_range), ("bilap_range", l.bilap_range)] {
            if !(lo < hi) {
                return Err(CliError::Config(format!("linearize.{name} is empty")));
            }
        }
        for &r in &l.table_radii {
            positive("linearize.table_radii", r)?;
            if r > l.r_max {
                return Err(CliError::Config(format!("table radius {r} exceeds r_max")));
            }
        }
        Ok(())
    }

    pub fn validate_analysis(&self) -> Result<(), CliError> {
        self.analysis
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn sections_parse() {
        let c = RunConfig::from_toml(
            r#"
seed = 7
[v]
kind = "constant"
c0 = 120.0
[family]
example = "1a"
params = [2.0, 4.0]
[hybrid]
Lambda_ratio = 1.1
lambdas = [0.04, 0.02]
[hybrid.grid]
r_min = 1e-3
ratio = 1.2
h = 0.1
r_max = 4.0
points = 5
[analysis]
deltas = [0.25]
"#,
        )
        .unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.family.params, vec![2.0, 4.0]);
        assert_eq!(c.hybrid.grid.r_max, 4.0);
        assert_eq!(c.analysis.deltas, vec![0.25]);
        assert_eq!(c.analysis.neck_p, 1.5);
        c.validate_family().unwrap();
        c.validate_hybrid().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let e = RunConfig::from_toml("[spherical]\nrmax = 3.0\n").unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn validation_errors() {
        let mut c = RunConfig::default();
        c.spherical.r_max = 0.0;
        assert_eq!(c.validate_spherical().unwrap_err().exit_code(), 2);
        let mut c = RunConfig::default();
        c.family.example = "4".into();
        assert!(matches!(c.validate_family(), Err(CliError::Usage(_))));
        c.family.example = "1a".into();
        c.family.params.clear();
        assert!(matches!(c.validate_family(), Err(CliError::Usage(_))));
        let mut c = RunConfig::default();
        c.hybrid.lambda_ratio = 0.5;
        assert!(matches!(c.validate_hybrid(), Err(CliError::Config(_))));
        let mut c = RunConfig::default();
        c.hybrid.lambdas = vec![1.0 / 48.0, 1.0 / 24.0];
        assert!(c.validate_hybrid().is_err());
    }
}
