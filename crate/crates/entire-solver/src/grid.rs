//! Cell-wise Gauss–Legendre nodes for the Nyström discretisation.

use crate::error::SolverError;
use radial_core::quad::GaussRule;
use radial_core::RadialGrid;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Cell layout: geometric cells from `r_min` with ratio `ratio` until the
/// cell width reaches `h`, uniform cells up to `r_max`, `points` nodes per cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub ratio: f64,
    pub h: f64,
    pub r_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            r_min: 1e-4,
            ratio: 1.05,
            h: 0.04,
            r_max: 5.0,
            points: 5,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NystromGrid {
    pub spec: GridSpec,
    /// Cell boundaries, starting at 0.
    pub breaks: Vec<f64>,
    /// Quadrature nodes.
    pub nodes: Vec<f64>,
    /// Plain `ds` weights.
    pub weights: Vec<f64>,
}

impl NystromGrid {
    pub fn new(spec: GridSpec) -> Result<Self, SolverError> {
        let GridSpec {
            r_min,
            ratio,
            h,
            r_max,
            points,
        } = spec;
        if !(r_min > 0.0 && ratio > 1.0 && h > 0.0 && r_max > r_min && points >= 2) {
            return Err(SolverError::InvalidConfig(format!("bad grid {spec:?}")));
        }
        let mut breaks = vec![0.0, r_min];
        let mut b = r_min;
        loop {
            let w = (b * (ratio - 1.0)).min(h);
            if b + w >= r_max - 1e-12 {
                break;
            }
            b += w;
            breaks.push(b);
        }
        breaks.push(r_max);
        let rule = GaussRule::new(points);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in breaks.windows(2) {
            for (x, wt) in rule.mapped(w[0], w[1]) {
                nodes.push(x);
                weights.push(wt);
            }
        }
        Ok(NystromGrid {
            spec,
            breaks,
            nodes,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.spec.r_max
    }

    /// The nodes as a radial grid for fields.
    pub fn radial_grid(&self) -> Result<Arc<RadialGrid>, SolverError> {
        Ok(Arc::new(RadialGrid::new(
            self.nodes.clone(),
            radial_core::Grading::Custom,
        )?))
    }

    /// `∫₀^{r_max} g(s) s^k ds` by the node rule.
    pub fn moment<F: Fn(usize) -> f64>(&self, k: i32, g: F) -> f64 {
        (0..self.len())
            .map(|i| g(i) * self.weights[i] * self.nodes[i].powi(k))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_size_and_moments() {
        let g = NystromGrid::new(GridSpec::default()).unwrap();
        assert!(g.len() > 1300 && g.len() < 1600, "{}", g.len());
        let m = g.moment(5, |_| 1.0);
        assert!((m - 5f64.powi(6) / 6.0).abs() < 1e-9);
        let e = g.moment(5, |i| (-6.0 * g.nodes[i].powi(4)).exp());
        // ∫ s⁵ e^{−6s⁴} ds = Γ(3/2)/(4·6^{3/2})
        let exact = 0.5 * std::f64::consts::PI.sqrt() / (4.0 * 6f64.powf(1.5));
        assert!((e - exact).abs() < 1e-12);
    }
}
