//! Fixed-point variant with the coefficient `β = k + |Δv(0)|/24`:
//! `v = (120/γ₆) ∫ log(1/|x−y|) e^{6v} dy − β(1−|x|²)² + c`, `120 ∫ e^{6v} = Λ`.
//!
//! No convergence guarantee.

use crate::error::SolverError;
use crate::grid::{GridSpec, NystromGrid};
use crate::kernel::build_log_kernel;
use radial_core::constants::{GAMMA6, LAMBDA1, OMEGA5};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Example3Config {
    #[serde(rename = "Lambda")]
    pub total: f64,
    pub k: f64,
    pub damping: f64,
    pub grid: GridSpec,
    pub max_sweeps: usize,
    pub tol: f64,
    pub kernel_order: usize,
}

impl Default for Example3Config {
    fn default() -> Self {
        Example3Config {
            total: 2.0 * LAMBDA1,
            k: 1.0,
            damping: 0.5,
            grid: GridSpec {
                r_max: 3.0,
                ..GridSpec::default()
            },
            max_sweeps: 1000,
            tol: 1e-10,
            kernel_order: 12,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Example3Solution {
    pub k: f64,
    pub beta: f64,
    pub c: f64,
    pub u0: f64,
    pub lap_u0: f64,
    pub bilap_u0: f64,
    #[serde(rename = "Lambda_achieved")]
    pub total_achieved: f64,
    pub sweeps: usize,
    pub residual: f64,
    #[serde(skip)]
    pub nodes: Vec<f64>,
    /// `v` at the nodes.
    #[serde(skip)]
    pub v: Vec<f64>,
}

struct Inner {
    p: Vec<f64>,
    c: f64,
    f: Vec<f64>,
    lap_i0: f64,
    sweeps: usize,
    residual: f64,
}

struct Setup {
    grid: NystromGrid,
    kernel: crate::kernel::KernelTable,
    wm: Vec<f64>,
    w3: Vec<f64>,
    w1: Vec<f64>,
    phi2: Vec<f64>,
}

/// Damped Picard for the potential `I` at fixed `β`.
fn inner(set: &Setup, cfg: &Example3Config, beta: f64, warm: &[f64]) -> Result<Inner, SolverError> {
    let n = set.grid.len();
    let mut p = warm.to_vec();
    let mut residual = f64::INFINITY;
    for sweep in 1..=cfg.max_sweeps {
        let a: Vec<f64> = (0..n).map(|i| 6.0 * (p[i] - beta * set.phi2[i])).collect();
        let amax = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = (0..n).map(|i| 120.0 * (a[i] - amax).exp() * set.wm[i]).sum();
        let c = (cfg.total.ln() - amax - sum.ln()) / 6.0;
        let f: Vec<f64> = a.iter().map(|x| 120.0 * (x + 6.0 * c).exp()).collect();
        if f.iter().any(|x| !x.is_finite()) {
            return Err(SolverError::Diverged {
                sweeps: sweep,
                theta: cfg.damping,
            });
        }
        let wf: Vec<f64> = (0..n).map(|i| f[i] * set.wm[i] / GAMMA6).collect();
        let next = set.kernel.apply(&wf);
        residual = (0..n).map(|i| (next[i] - p[i]).abs()).fold(0.0, f64::max);
        if residual < cfg.tol {
            let lap_i0 = -(4.0 / GAMMA6) * (0..n).map(|i| f[i] * set.w3[i]).sum::<f64>();
            return Ok(Inner {
                p,
                c,
                f,
                lap_i0,
                sweeps: sweep,
                residual,
            });
        }
        for i in 0..n {
            p[i] += cfg.damping * (next[i] - p[i]);
        }
    }
    Err(SolverError::NoConvergence {
        iterations: cfg.max_sweeps,
        residual,
    })
}

/// `(k, β, ΔI(0))` to the branch residual, `None` off the branch.
type Branch = fn(f64, f64, f64) -> Option<f64>;

/// Solve for `(v, β)`.
///
/// `β = k + |Δv(0)|/24` with `Δv(0) = ΔI(0) + 24β` reduces to `ΔI(0) = −24k`
/// when `Δv(0) ≥ 0` and to `2β = k − ΔI(0)/24` otherwise. Each branch is a
/// scalar equation in `β ≥ k`, bracketed on a geometric scan and bisected,
/// with the potential at fixed `β` from damped Picard.
pub fn example3_solve(cfg: &Example3Config) -> Result<Example3Solution, SolverError> {
    if !(cfg.total > 0.0 && cfg.k > 0.0 && cfg.damping > 0.0 && cfg.damping <= 1.0) {
        return Err(SolverError::InvalidConfig(format!("{cfg:?}")));
    }
    let grid = NystromGrid::new(cfg.grid.clone())?;
    let kernel = build_log_kernel(&grid.nodes, &grid.nodes, cfg.kernel_order)?;
    let n = grid.len();
    let w = |k: i32| -> Vec<f64> {
        (0..n)
            .map(|i| OMEGA5 * grid.weights[i] * grid.nodes[i].powi(k))
            .collect()
    };
    let (wm, w3, w1) = (w(5), w(3), w(1));
    let phi2: Vec<f64> = grid.nodes.iter().map(|r| (1.0 - r * r).powi(2)).collect();
    let set = Setup {
        grid,
        kernel,
        wm,
        w3,
        w1,
        phi2,
    };
    let k = cfg.k;
    let branches: [Branch; 2] = [
        |k, beta, lap_i0| (lap_i0 + 24.0 * beta >= 0.0).then_some(lap_i0 + 24.0 * k),
        |k, beta, lap_i0| (lap_i0 + 24.0 * beta < 0.0).then_some(2.0 * beta - k + lap_i0 / 24.0),
    ];
    let zero = vec![0.0; n];
    let mut total_sweeps = 0;
    let mut last_err = SolverError::NoConvergence {
        iterations: 0,
        residual: f64::INFINITY,
    };
    let scan: Vec<f64> = (0..=48).map(|j| k * 2f64.powf(j as f64 / 4.0)).collect();
    let mut states = Vec::with_capacity(scan.len());
    for &beta in &scan {
        let st = inner(&set, cfg, beta, &zero);
        if let Ok(s) = &st {
            total_sweeps += s.sweeps;
        }
        states.push(st);
    }
    for g in branches {
        for j in 0..scan.len() - 1 {
            let (Ok(a), Ok(b)) = (&states[j], &states[j + 1]) else {
                continue;
            };
            let (Some(ga), Some(gb)) = (g(k, scan[j], a.lap_i0), g(k, scan[j + 1], b.lap_i0)) else {
                continue;
            };
            if ga.signum() == gb.signum() {
                continue;
            }
            let (mut lo, mut hi, mut glo) = (scan[j], scan[j + 1], ga);
            let mut best = None;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let st = match inner(&set, cfg, mid, &a.p) {
                    Ok(s) => s,
                    Err(e) => {
                        last_err = e;
                        break;
                    }
                };
                total_sweeps += st.sweeps;
                let Some(gm) = g(k, mid, st.lap_i0) else { break };
                if gm.signum() == glo.signum() {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
                best = Some((mid, st));
                if hi - lo <= 1e-13 * hi {
                    break;
                }
            }
            if let Some((beta, st)) = best {
                let lap0 = st.lap_i0 + 24.0 * beta;
                if (beta - k - lap0.abs() / 24.0).abs() > 1e-6 * beta {
                    continue;
                }
                let wf: Vec<f64> = (0..n).map(|i| st.f[i] * set.wm[i] / GAMMA6).collect();
                let i0: f64 = (0..n).map(|i| -set.grid.nodes[i].ln() * wf[i]).sum();
                let bilap_i0 = 16.0 / GAMMA6 * (0..n).map(|i| st.f[i] * set.w1[i]).sum::<f64>();
                return Ok(Example3Solution {
                    k,
                    beta,
                    c: st.c,
                    u0: i0 - beta + st.c,
                    lap_u0: lap0,
                    bilap_u0: bilap_i0 - 384.0 * beta,
                    total_achieved: (0..n).map(|i| st.f[i] * set.wm[i]).sum(),
                    sweeps: total_sweeps,
                    residual: st.residual,
                    v: (0..n).map(|i| st.p[i] - beta * set.phi2[i] + st.c).collect(),
                    nodes: set.grid.nodes.clone(),
                });
            }
        }
    }
    Err(last_err)
}
