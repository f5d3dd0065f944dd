//! Radial grids and sampled radial fields with local polynomial interpolation.

use crate::error::RadialError;
use crate::Result;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Grading {
    Uniform,
    GeometricRefined { ratio: f64, near: Vec<f64> },
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    grading: Grading,
}

impl RadialGrid {
    pub fn new(nodes: Vec<f64>, grading: Grading) -> Result<Self> {
        if nodes.is_empty() {
            return Err(RadialError::InvalidGrid("no nodes".into()));
        }
        if nodes.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(RadialError::InvalidGrid("nodes must be finite and non-negative".into()));
        }
        if let Some(w) = nodes.windows(2).find(|w| w[1] <= w[0]) {
            return Err(RadialError::InvalidGrid(format!(
                "nodes not strictly increasing at {} -> {}",
                w[0], w[1]
            )));
        }
        Ok(RadialGrid { nodes, grading })
    }

    /// `n` equal cells on [0, r_max].
    pub fn uniform(r_max: f64, n: usize) -> Result<Self> {
        if !(r_max > 0.0) || n == 0 {
            return Err(RadialError::InvalidGrid("uniform grid needs r_max > 0 and n > 0".into()));
        }
        let h = r_max / n as f64;
        let nodes = (0..=n).map(|i| if i == n { r_max } else { i as f64 * h }).collect();
        Self::new(nodes, Grading::Uniform)
    }

    /// 0, then geometric nodes from `r_min` with `ratio` up to 1, then step `h` up to `r_max`.
    pub fn refined(r_min: f64, ratio: f64, h: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_min < 1.0 && ratio > 1.0 && h > 0.0 && r_max > 1.0) {
            return Err(RadialError::InvalidGrid(format!(
                "refined grid parameters r_min={r_min} ratio={ratio} h={h} r_max={r_max}"
            )));
        }
        let mut nodes = vec![0.0, r_min];
        while nodes.last().unwrap() * ratio < 1.0 - 1e-12 {
            let next = nodes.last().unwrap() * ratio;
            nodes.push(next);
        }
        if 1.0 - nodes.last().unwrap() < 0.25 * (ratio - 1.0) {
            nodes.pop();
        }
        nodes.push(1.0);
        let cells = ((r_max - 1.0) / h).round().max(1.0) as usize;
        let step = (r_max - 1.0) / cells as f64;
        for i in 1..=cells {
            nodes.push(if i == cells { r_max } else { 1.0 + i as f64 * step });
        }
        Self::new(
            nodes,
            Grading::GeometricRefined {
                ratio,
                near: vec![0.0],
            },
        )
    }

    /// 0 followed by geometric nodes from `r_min` to `r_max`.
    pub fn geometric(r_min: f64, ratio: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0 && ratio > 1.0 && r_max > r_min) {
            return Err(RadialError::InvalidGrid("geometric grid parameters".into()));
        }
        let mut nodes = vec![0.0, r_min];
        while nodes.last().unwrap() * ratio < r_max {
            let next = nodes.last().unwrap() * ratio;
            nodes.push(next);
        }
        if r_max - nodes.last().unwrap() < 0.25 * (ratio - 1.0) * nodes.last().unwrap() {
            nodes.pop();
        }
        nodes.push(r_max);
        Self::new(
            nodes,
            Grading::GeometricRefined {
                ratio,
                near: vec![0.0],
            },
        )
    }

    /// Default grid: ratio 1.05 from 1e-4 to 1, step 0.02 beyond.
    pub fn default_for(r_max: f64) -> Result<Self> {
        Self::refined(1e-4, 1.05, 0.02, r_max)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn contains(&self, r: f64) -> bool {
        r >= self.r_min() && r <= self.r_max()
    }

    /// Grid with every node multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.nodes.iter().map(|r| r * factor).collect(),
            self.grading.clone(),
        )
    }

    /// Index `i` with `nodes[i] <= r < nodes[i+1]` (last cell for r = r_max).
    pub fn cell(&self, r: f64) -> usize {
        let n = self.nodes.len();
        if n < 2 {
            return 0;
        }
        match self.nodes.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    /// Mirror as an even function through r = 0.
    Even,
    None,
}

/// One real value per grid node, interpolated by local Lagrange stencils.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct RadialField {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    order: usize,
    parity: Parity,
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    r: Vec<f64>,
    value: Vec<f64>,
    #[serde(default = "default_order")]
    order: usize,
}

fn default_order() -> usize {
    5
}

impl TryFrom<FieldRepr> for RadialField {
    type Error = RadialError;
    fn try_from(f: FieldRepr) -> Result<Self> {
        let grid = RadialGrid::new(f.r, Grading::Custom)?;
        RadialField::new(Arc::new(grid), f.value)?.with_order(f.order)
    }
}

impl From<RadialField> for FieldRepr {
    fn from(f: RadialField) -> Self {
        FieldRepr {
            r: f.grid.nodes.clone(),
            value: f.values,
            order: f.order,
        }
    }
}

impl RadialField {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(RadialError::InvalidField(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let parity = if grid.r_min() == 0.0 {
            Parity::Even
        } else {
            Parity::None
        };
        Ok(RadialField {
            grid,
            values,
            order: 5,
            parity,
        })
    }

    pub fn from_fn<F: Fn(f64) -> f64>(grid: Arc<RadialGrid>, f: F) -> Self {
        let values = grid.nodes().iter().map(|&r| f(r)).collect();
        RadialField::new(grid, values).expect("lengths match by construction")
    }

    /// Interpolation order (polynomial degree of the local stencil), at least 3.
    pub fn with_order(mut self, order: usize) -> Result<Self> {
        if order < 3 {
            return Err(RadialError::InvalidParameter(format!(
                "interpolation order {order} < 3"
            )));
        }
        self.order = order;
        Ok(self)
    }

    pub fn with_parity(mut self, parity: Parity) -> Self {
        self.parity = parity;
        self
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map<F: Fn(f64, f64) -> f64>(&self, f: F) -> RadialField {
        let values = self
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&r, &v)| f(r, v))
            .collect();
        RadialField {
            grid: self.grid.clone(),
            values,
            order: self.order,
            parity: self.parity,
        }
    }

    /// Stencil of `order + 1` points around `r`, mirrored through 0 for even fields.
    ///
    /// Candidates are taken nearest first, skipping any closer to an accepted
    /// point than 0.3 of its own distance to `r`; clustered nodes would
    /// otherwise make the Lagrange weights blow up.
    fn stencil(&self, r: f64, center: Option<usize>) -> (Vec<f64>, Vec<f64>) {
        let nodes = self.grid.nodes();
        let n = nodes.len() as isize;
        let m = (self.order + 1).min(self.max_points());
        let i = match center {
            Some(i) => i as isize,
            None => self.grid.cell(r) as isize,
        };
        let mirrored = self.parity == Parity::Even && nodes[0] == 0.0;
        let lo_limit = if mirrored { -(n - 1) } else { 0 };
        let span = 4 * m as isize;
        let mut cand: Vec<(f64, f64)> = ((i - span).max(lo_limit)..=(i + span).min(n - 1))
            .map(|j| {
                if j >= 0 {
                    (nodes[j as usize], self.values[j as usize])
                } else {
                    (-nodes[(-j) as usize], self.values[(-j) as usize])
                }
            })
            .collect();
        cand.sort_by(|a, b| (a.0 - r).abs().total_cmp(&(b.0 - r).abs()));
        let mut xs: Vec<f64> = Vec::with_capacity(m);
        let mut ys: Vec<f64> = Vec::with_capacity(m);
        for &(x, y) in &cand {
            let d = (x - r).abs();
            if xs.iter().all(|&a| (a - x).abs() >= 0.3 * d) {
                xs.push(x);
                ys.push(y);
                if xs.len() == m {
                    break;
                }
            }
        }
        if xs.len() < m {
            for &(x, y) in &cand {
                if xs.len() == m {
                    break;
                }
                if !xs.contains(&x) {
                    xs.push(x);
                    ys.push(y);
                }
            }
        }
        (xs, ys)
    }

    fn max_points(&self) -> usize {
        let n = self.grid.len();
        if self.parity == Parity::Even && self.grid.r_min() == 0.0 {
            2 * n - 1
        } else {
            n
        }
    }

    fn check_range(&self, r: f64) -> Result<()> {
        if !self.grid.contains(r) {
            return Err(RadialError::OutOfRange {
                r,
                lo: self.grid.r_min(),
                hi: self.grid.r_max(),
            });
        }
        Ok(())
    }

    /// Interpolated value at `r`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        self.check_range(r)?;
        if let Ok(i) = self
            .grid
            .nodes()
            .binary_search_by(|x| x.partial_cmp(&r).unwrap())
        {
            return Ok(self.values[i]);
        }
        let (xs, ys) = self.stencil(r, None);
        let w = fornberg(r, &xs, 0);
        Ok(dot(&w[0], &ys))
    }

    /// (f, f', f'') at `r` from the local stencil.
    pub fn derivatives(&self, r: f64) -> Result<[f64; 3]> {
        self.check_range(r)?;
        let (xs, ys) = self.stencil(r, None);
        let w = fornberg(r, &xs, 2);
        Ok([dot(&w[0], &ys), dot(&w[1], &ys), dot(&w[2], &ys)])
    }

    pub(crate) fn node_derivatives(&self, i: usize) -> [f64; 3] {
        let r = self.grid.nodes()[i];
        let (xs, ys) = self.stencil(r, Some(i));
        let w = fornberg(r, &xs, 2);
        [dot(&w[0], &ys), dot(&w[1], &ys), dot(&w[2], &ys)]
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["r", "value"])?;
        for (r, v) in self.nodes().iter().zip(&self.values) {
            wtr.write_record([format!("{r:.17e}"), format!("{v:.17e}")])?;
        }
        wtr.flush().map_err(|e| RadialError::Csv(e.to_string()))?;
        Ok(())
    }

    pub fn read_csv<R: std::io::Read>(rdr: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(rdr);
        let headers = rdr.headers()?.clone();
        if headers.len() < 2 || &headers[0] != "r" || &headers[1] != "value" {
            return Err(RadialError::Csv(format!(
                "expected header \"r,value\", found \"{}\"",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let mut r = Vec::new();
        let mut v = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| RadialError::Csv(format!("bad number {s:?}: {e}")))
            };
            r.push(parse(&rec[0])?);
            v.push(parse(&rec[1])?);
        }
        let grid = RadialGrid::new(r, Grading::Custom)?;
        RadialField::new(Arc::new(grid), v)
    }

    pub fn read_csv_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let f = std::fs::File::open(path.as_ref())
            .map_err(|e| RadialError::Csv(format!("{}: {e}", path.as_ref().display())))?;
        Self::read_csv(f)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fornberg's finite-difference weights: `w[k][j]` is the weight of node j
/// for the k-th derivative at `x0`.
pub fn fornberg(x0: f64, xs: &[f64], max_deriv: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let m = max_deriv;
    let mut c = vec![vec![0.0; n]; m + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_nodes() {
        assert!(RadialGrid::new(vec![0.0, 1.0, 1.0], Grading::Custom).is_err());
        assert!(RadialGrid::new(vec![0.0, 2.0, 1.0], Grading::Custom).is_err());
        assert!(RadialGrid::new(vec![-1.0, 2.0], Grading::Custom).is_err());
    }

    #[test]
    fn default_grid_shape() {
        let g = RadialGrid::default_for(5.0).unwrap();
        assert_eq!(g.r_min(), 0.0);
        assert_eq!(g.r_max(), 5.0);
        assert!(g.nodes().contains(&1.0));
        let n = g.nodes();
        let last = n.len() - 1;
        assert!((n[last] - n[last - 1] - 0.02).abs() < 1e-12);
    }

    #[test]
    fn interpolation_reproduces_nodes_and_polynomials() {
        let g = Arc::new(RadialGrid::default_for(3.0).unwrap());
        let f = RadialField::from_fn(g.clone(), |r| 1.0 + r * r - 0.3 * r.powi(4));
        for (i, &r) in g.nodes().iter().enumerate() {
            assert_eq!(f.eval(r).unwrap(), f.values()[i]);
        }
        for r in [0.0f64, 1e-5, 0.013, 0.5, 1.234, 2.999] {
            let exact = 1.0 + r * r - 0.3 * r.powi(4);
            assert!((f.eval(r).unwrap() - exact).abs() < 1e-12);
            let d = f.derivatives(r).unwrap();
            assert!((d[1] - (2.0 * r - 1.2 * r.powi(3))).abs() < 1e-8);
            assert!((d[2] - (2.0 - 3.6 * r * r)).abs() < 1e-6);
        }
    }

    #[test]
    fn out_of_range() {
        let g = Arc::new(RadialGrid::uniform(1.0, 10).unwrap());
        let f = RadialField::from_fn(g, |r| r);
        assert!(matches!(f.eval(1.5), Err(RadialError::OutOfRange { .. })));
    }

    #[test]
    fn csv_roundtrip() {
        let g = Arc::new(RadialGrid::uniform(2.0, 8).unwrap());
        let f = RadialField::from_fn(g, |r| (-r).exp());
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("r,value\n"));
        let back = RadialField::read_csv(&buf[..]).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.nodes(), f.nodes());
    }

    #[test]
    fn csv_header_checked() {
        let data = b"x,y\n0,1\n";
        assert!(RadialField::read_csv(&data[..]).is_err());
    }
}
