//! Finite-sample proxies for limits along a family.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendCheck {
    pub target: f64,
    pub tolerance: f64,
    /// Relative error of the last member.
    pub last_error: f64,
    pub within: bool,
    /// Relative errors non-increasing over the last three members.
    pub monotone: bool,
}

impl TrendCheck {
    pub fn passes(&self) -> bool {
        self.within && self.monotone
    }
}

/// `values → target`: last value within `tolerance` (relative) and the error
/// shrinking over the last three values.
pub fn trend_to(values: &[f64], target: f64, tolerance: f64) -> Option<TrendCheck> {
    let last = *values.last()?;
    let err = |v: f64| ((v - target) / target).abs();
    let tail = &values[values.len().saturating_sub(3)..];
    let monotone = tail.len() >= 2 && tail.windows(2).all(|w| err(w[1]) <= err(w[0]));
    Some(TrendCheck {
        target,
        tolerance,
        last_error: err(last),
        within: err(last) <= tolerance,
        monotone,
    })
}

/// Strictly increasing.
pub fn increasing(values: &[f64]) -> bool {
    values.len() >= 2 && values.windows(2).all(|w| w[1] > w[0])
}

/// Strictly decreasing.
pub fn decreasing(values: &[f64]) -> bool {
    values.len() >= 2 && values.windows(2).all(|w| w[1] < w[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approach_and_tolerance() {
        let t = trend_to(&[0.5, 0.4, 0.36, 0.34], 1.0 / 3.0, 0.05).unwrap();
        assert!(t.passes());
        let t = trend_to(&[0.34, 0.36, 0.35], 1.0 / 3.0, 0.1).unwrap();
        assert!(t.within && !t.monotone);
        assert!(trend_to(&[], 1.0, 0.1).is_none());
        assert!(!trend_to(&[0.3], 1.0 / 3.0, 0.5).unwrap().monotone);
    }

    #[test]
    fn monotone_helpers() {
        assert!(increasing(&[1.0, 2.0, 3.0]));
        assert!(!increasing(&[1.0, 1.0]));
        assert!(decreasing(&[3.0, -1.0]));
        assert!(!decreasing(&[3.0]));
    }
}
