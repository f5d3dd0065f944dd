//! Named pass/fail checks recorded with their effective thresholds.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub value: f64,
    pub limit: f64,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

impl Check {
    /// Passes when `value ≤ limit`.
    pub fn at_most(id: &str, value: f64, limit: f64) -> Self {
        Check {
            id: id.to_string(),
            passed: value <= limit,
            value,
            limit,
            detail: String::new(),
        }
    }

    /// Boolean check; `value` is 1 or 0.
    pub fn holds(id: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            id: id.to_string(),
            passed: ok,
            value: if ok { 1.0 } else { 0.0 },
            limit: 1.0,
            detail: detail.into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub command: String,
    pub tol_scale: f64,
    pub tolerances: serde_json::Value,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn failing(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.id.clone())
            .collect()
    }
}
