//! Spherical means of `log(1/|x−y|)` over S⁵.

use crate::error::SolverError;
use radial_core::quad::GaussRule;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io::Write;

/// `∫₀^π sin⁴θ dθ`.
const SIN4_NORM: f64 = 3.0 * PI / 8.0;
const MAX_LEVELS: i32 = 40;

/// `K(r,s)` by polar-angle quadrature with the S⁵ weight `sin⁴θ`.
///
/// Panels are graded geometrically toward θ = 0, where the integrand
/// `−½ log(1 − 2t cosθ + t²)`, `t = min/max`, is nearly singular for `t → 1`.
pub fn log_kernel_with(rule: &GaussRule, r: f64, s: f64) -> f64 {
    let m = r.max(s);
    if m == 0.0 {
        return f64::INFINITY;
    }
    let t = r.min(s) / m;
    if t == 0.0 {
        return -m.ln();
    }
    let levels = if t < 1.0 {
        ((PI / (1.0 - t)).log2().ceil() as i32 + 2).clamp(2, MAX_LEVELS)
    } else {
        MAX_LEVELS
    };
    let gap = (1.0 - t) * (1.0 - t);
    let f = |th: f64| {
        let h = (0.5 * th).sin();
        let s2 = th.sin().powi(2);
        -0.5 * (gap + 4.0 * t * h * h).ln() * s2 * s2
    };
    let mut acc = rule.integrate(PI / 2.0, PI, f);
    let mut hi = PI / 2.0;
    for _ in 1..levels {
        let lo = 0.5 * hi;
        acc += rule.integrate(lo, hi, f);
        hi = lo;
    }
    acc += rule.integrate(0.0, hi, f);
    -m.ln() + acc / SIN4_NORM
}

/// [`log_kernel_with`] using the 12-point rule.
pub fn log_kernel(r: f64, s: f64) -> f64 {
    log_kernel_with(rule12(), r, s)
}

fn rule12() -> &'static GaussRule {
    static RULE: std::sync::OnceLock<GaussRule> = std::sync::OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(12))
}

/// Dense table `K(r_i, s_j)`.
#[derive(Clone, Debug)]
pub struct KernelTable {
    pub r_nodes: Vec<f64>,
    pub s_nodes: Vec<f64>,
    /// Row-major, `r` by `s`.
    pub values: Vec<f64>,
    pub order: usize,
}

impl KernelTable {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.s_nodes.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.s_nodes.len();
        &self.values[i * n..(i + 1) * n]
    }

    /// `Σ_j K(r_i, s_j) x_j`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.r_nodes.len())
            .into_par_iter()
            .map(|i| self.row(i).iter().zip(x).map(|(k, v)| k * v).sum())
            .collect()
    }

    /// Largest `|K(r_i, s_j) − K(s_j, r_i)|` on a square table.
    pub fn asymmetry(&self) -> f64 {
        let n = self.r_nodes.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// CSV matrix; header `r\s,s_0,…`, then one row per `r`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SolverError> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut head = vec!["r\\s".to_string()];
        head.extend(self.s_nodes.iter().map(|s| format!("{s:.17e}")));
        wtr.write_record(&head).map_err(radial_core::RadialError::from)?;
        for (i, r) in self.r_nodes.iter().enumerate() {
            let mut rec = vec![format!("{r:.17e}")];
            rec.extend(self.row(i).iter().map(|k| format!("{k:.17e}")));
            wtr.write_record(&rec).map_err(radial_core::RadialError::from)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// Tabulate `K` on `r_nodes × s_nodes` with a Gauss rule of `order` points per panel.
///
/// Square tables are filled on one triangle and mirrored.
pub fn build_log_kernel(
    r_nodes: &[f64],
    s_nodes: &[f64],
    order: usize,
) -> Result<KernelTable, SolverError> {
    let rule = GaussRule::new(order.max(2));
    let square = r_nodes == s_nodes;
    let n = s_nodes.len();
    let rows: Vec<Vec<f64>> = r_nodes
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let start = if square { i } else { 0 };
            let mut row = vec![0.0; n];
            for j in start..n {
                row[j] = log_kernel_with(&rule, r, s_nodes[j]);
            }
            row
        })
        .collect();
    let mut values = vec![0.0; r_nodes.len() * n];
    for (i, row) in rows.iter().enumerate() {
        let start = if square { i } else { 0 };
        for j in start..n {
            let k = row[j];
            if !k.is_finite() {
                return Err(SolverError::KernelQuadrature {
                    r: r_nodes[i],
                    s: s_nodes[j],
                });
            }
            values[i * n + j] = k;
            if square {
                values[j * n + i] = k;
            }
        }
    }
    Ok(KernelTable {
        r_nodes: r_nodes.to_vec(),
        s_nodes: s_nodes.to_vec(),
        values,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(r: f64, s: f64) -> f64 {
        let m = r.max(s);
        let t = r.min(s) / m;
        -m.ln() - t * t / 3.0 + t.powi(4) / 24.0
    }

    #[test]
    fn origin_row_is_minus_log() {
        assert_eq!(log_kernel(2.0, 0.0), -(2f64.ln()));
        assert_eq!(log_kernel(0.0, 3.0), -(3f64.ln()));
    }

    #[test]
    fn matches_series_form() {
        for (r, s) in [(2.0, 1.0), (1.0, 1.0), (0.3, 0.31), (1.0, 1.0 - 1e-9), (4.0, 0.01)] {
            let k = log_kernel(r, s);
            assert!((k - closed(r, s)).abs() < 1e-12, "({r},{s}): {k} vs {}", closed(r, s));
        }
    }

    #[test]
    fn table_is_symmetric() {
        let nodes = vec![0.1, 0.5, 1.0, 2.0, 3.0];
        let t = build_log_kernel(&nodes, &nodes, 12).unwrap();
        assert_eq!(t.asymmetry(), 0.0);
        assert!((t.get(2, 4) - log_kernel(1.0, 3.0)).abs() < 1e-15);
    }
}
