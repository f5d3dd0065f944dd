//! Damped Picard iteration, Newton fallback and λ-continuation.

use crate::error::SolverError;
use crate::grid::{GridSpec, NystromGrid};
use crate::kernel::{build_log_kernel, log_kernel, KernelTable};
use nalgebra::{DMatrix, DVector};
use ode_shooter::{integrate_ivp, IvpSpec, Trajectory};
use radial_core::constants::{GAMMA6, LAMBDA1, OMEGA5};
use radial_core::grid::Parity;
use radial_core::{RadialField, VSpec};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::Arc;

const MAX_EXP: f64 = 700.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FixedPointConfig {
    /// Target total curvature Λ.
    #[serde(rename = "Lambda")]
    pub total: f64,
    /// λ ∈ (0, 1/24].
    pub lambda: f64,
    /// Initial damping θ.
    pub damping: f64,
    pub damping_floor: f64,
    pub grid: GridSpec,
    pub max_sweeps: usize,
    /// Sup-norm tolerance on the fixed-point update.
    pub tol: f64,
    /// Solve the same discrete system by Newton when Picard fails.
    pub newton_fallback: bool,
    pub max_newton: usize,
    /// Gauss points per angular panel in the kernel.
    pub kernel_order: usize,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        FixedPointConfig {
            total: LAMBDA1,
            lambda: 1.0 / 24.0,
            damping: 0.5,
            damping_floor: 1.0 / 64.0,
            grid: GridSpec::default(),
            max_sweeps: 600,
            tol: 1e-10,
            newton_fallback: true,
            max_newton: 60,
            kernel_order: 12,
        }
    }
}

impl FixedPointConfig {
    pub fn new(total: f64, lambda: f64) -> Self {
        FixedPointConfig {
            total,
            lambda,
            ..FixedPointConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.total > 0.0) || !self.total.is_finite() {
            return Err(SolverError::InvalidConfig(format!("Lambda = {}", self.total)));
        }
        if !(self.lambda > 0.0 && self.lambda <= 1.0 / 24.0 + 1e-15) {
            return Err(SolverError::InvalidConfig(format!(
                "lambda = {} outside (0, 1/24]",
                self.lambda
            )));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(SolverError::InvalidConfig(format!(
                "damping = {} outside (0, 1]",
                self.damping
            )));
        }
        if !(self.tol > 0.0) {
            return Err(SolverError::InvalidConfig(format!("tol = {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Picard,
    Newton,
}

/// One sweep or Newton step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub method: Method,
    pub update: f64,
    pub damping: f64,
}

/// Grid and kernel shared by solves on the same discretisation.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub grid: Arc<NystromGrid>,
    pub kernel: Arc<KernelTable>,
}

impl Discretization {
    pub fn new(spec: &GridSpec, order: usize) -> Result<Self, SolverError> {
        let grid = NystromGrid::new(spec.clone())?;
        let kernel = build_log_kernel(&grid.nodes, &grid.nodes, order)?;
        Ok(Discretization {
            grid: Arc::new(grid),
            kernel: Arc::new(kernel),
        })
    }
}

/// Node weights and fixed vectors of the discrete map.
struct System<'a> {
    disc: &'a Discretization,
    /// `ln(V e^{−6s⁴})`.
    log_base: Vec<f64>,
    /// `ω₅ w s⁵ / γ₆`.
    wv: Vec<f64>,
    /// `ω₅ w s⁵`.
    wm: Vec<f64>,
    /// `ω₅ w s³`.
    w3: Vec<f64>,
    /// `r⁴ − 2r²`.
    p4: Vec<f64>,
    total: f64,
    lambda: f64,
}

struct Eval {
    c: f64,
    f: Vec<f64>,
    lap0: f64,
    /// `K(W_v f)`.
    g: Vec<f64>,
    t: Vec<f64>,
}

impl<'a> System<'a> {
    fn new(disc: &'a Discretization, v: &VSpec, total: f64, lambda: f64) -> Result<Self, SolverError> {
        let grid = &disc.grid;
        let mut log_base = Vec::with_capacity(grid.len());
        for &s in &grid.nodes {
            let val = v.value(s);
            if !(val >= 0.0) {
                return Err(SolverError::InvalidConfig(format!("V({s}) = {val} < 0")));
            }
            log_base.push(val.ln() - 6.0 * s.powi(4));
        }
        if !(v.value(0.0) > 0.0) {
            return Err(SolverError::InvalidConfig("V(0) must be positive".into()));
        }
        let w = |k: i32| -> Vec<f64> {
            grid.nodes
                .iter()
                .zip(&grid.weights)
                .map(|(s, ws)| OMEGA5 * ws * s.powi(k))
                .collect()
        };
        let wm = w(5);
        Ok(System {
            disc,
            log_base,
            wv: wm.iter().map(|x| x / GAMMA6).collect(),
            wm,
            w3: w(3),
            p4: grid.nodes.iter().map(|r| r.powi(4) - 2.0 * r * r).collect(),
            total,
            lambda,
        })
    }

    fn eval(&self, v: &[f64]) -> Result<Eval, SolverError> {
        let a: Vec<f64> = self.log_base.iter().zip(v).map(|(b, x)| b + 6.0 * x).collect();
        let amax = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !amax.is_finite() {
            return Err(SolverError::RescaleFailure(amax));
        }
        let sum: f64 = a
            .iter()
            .zip(&self.wm)
            .map(|(x, w)| (x - amax).exp() * w)
            .sum();
        let c = (self.total.ln() - amax - sum.ln()) / 6.0;
        if amax + 6.0 * c > MAX_EXP {
            return Err(SolverError::RescaleFailure(amax + 6.0 * c));
        }
        let f: Vec<f64> = a.iter().map(|x| (x + 6.0 * c).exp()).collect();
        let lap0 = -(4.0 / GAMMA6) * dot(&f, &self.w3) / (1.0 + 24.0 * self.lambda);
        let wf: Vec<f64> = f.iter().zip(&self.wv).map(|(x, w)| x * w).collect();
        let g = self.disc.kernel.apply(&wf);
        let t = g
            .iter()
            .zip(&self.p4)
            .map(|(gi, p)| gi + self.lambda * lap0 * p)
            .collect();
        Ok(Eval { c, f, lap0, g, t })
    }

    fn newton_step(&self, v: &[f64], e: &Eval) -> Result<Vec<f64>, SolverError> {
        let n = v.len();
        let q: Vec<f64> = e
            .f
            .iter()
            .zip(&self.wm)
            .map(|(f, w)| f * w / self.total)
            .collect();
        let sw3f = dot(&e.f, &self.w3);
        let coef = -(4.0 / GAMMA6) / (1.0 + 24.0 * self.lambda);
        let dlap: Vec<f64> = (0..n)
            .map(|k| coef * 6.0 * (self.w3[k] * e.f[k] - sw3f * q[k]))
            .collect();
        let d: Vec<f64> = (0..n).map(|k| 6.0 * self.wv[k] * e.f[k]).collect();
        let kt = &self.disc.kernel;
        let jac = DMatrix::from_fn(n, n, |i, k| {
            let id = if i == k { 1.0 } else { 0.0 };
            id - kt.get(i, k) * d[k] + 6.0 * e.g[i] * q[k] - self.lambda * self.p4[i] * dlap[k]
        });
        let rhs = DVector::from_iterator(n, v.iter().zip(&e.t).map(|(x, t)| t - x));
        let dx = jac.lu().solve(&rhs).ok_or(SolverError::Singular)?;
        Ok(dx.iter().cloned().collect())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

/// A converged entire solution `u = v + c − r⁴`.
#[derive(Clone, Debug)]
pub struct EntireSolution {
    pub grid: Arc<NystromGrid>,
    pub vspec: VSpec,
    /// `v` at the quadrature nodes.
    pub v: RadialField,
    /// `V e^{6u}` at the nodes.
    pub density: Vec<f64>,
    pub c: f64,
    pub lambda: f64,
    /// `Δv(0) = Δu(0)`.
    pub lap_v0: f64,
    pub u0: f64,
    pub bilap_u0: f64,
    pub total_target: f64,
    pub total_achieved: f64,
    pub sweeps: usize,
    pub residual: f64,
    pub method: Method,
    pub history: Vec<SweepRecord>,
    /// Estimate of the curvature beyond the truncation radius.
    pub tail_bound: f64,
}

/// JSON metadata of a solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionMeta {
    pub lambda: f64,
    pub c: f64,
    pub c_tilde: f64,
    pub u0: f64,
    pub lap_u0: f64,
    pub bilap_u0: f64,
    #[serde(rename = "Lambda_target")]
    pub total_target: f64,
    #[serde(rename = "Lambda_achieved")]
    pub total_achieved: f64,
    pub sweeps: usize,
    pub residual: f64,
    pub method: Method,
    pub tail_bound: f64,
    pub nodes: usize,
    pub r_max: f64,
}

impl EntireSolution {
    pub fn lap_u0(&self) -> f64 {
        self.lap_v0
    }

    /// `c̃ = c − λΔu(0)`, so that `u = I + λΔu(0)(1−r²)² − r⁴ + c̃`.
    pub fn c_tilde(&self) -> f64 {
        self.c - self.lambda * self.lap_v0
    }

    /// `v(r)` from the Nyström interpolant.
    pub fn v_at(&self, r: f64) -> f64 {
        let g = &self.grid;
        let mut acc = 0.0;
        for j in 0..g.len() {
            let s = g.nodes[j];
            acc += log_kernel(r, s) * self.density[j] * OMEGA5 * g.weights[j] * s.powi(5);
        }
        acc / GAMMA6 + self.lambda * self.lap_v0 * (r.powi(4) - 2.0 * r * r)
    }

    pub fn u_at(&self, r: f64) -> f64 {
        self.v_at(r) + self.c - r.powi(4)
    }

    /// `ũ = u − λΔu(0)(1−r²)² + r⁴` at the nodes.
    pub fn u_tilde(&self) -> Vec<f64> {
        let l = self.lambda * self.lap_v0;
        self.v
            .values()
            .iter()
            .zip(self.grid.nodes.iter())
            .map(|(v, r)| v + self.c - l * (1.0 - r * r).powi(2))
            .collect()
    }

    /// Whether `ũ` is non-increasing at all nodes.
    pub fn is_monotone(&self) -> bool {
        let t = self.u_tilde();
        let scale = t.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        t.windows(2).all(|w| w[1] <= w[0] + 1e-12 * scale)
    }

    /// Origin data `(u(0), Δu(0), Δ²u(0))`.
    pub fn origin_jet(&self) -> (f64, f64, f64) {
        (self.u0, self.lap_v0, self.bilap_u0)
    }

    /// Re-integrate the ODE from the origin data.
    pub fn trajectory(&self, r_max: f64) -> Result<Trajectory, SolverError> {
        let spec = IvpSpec::new(self.u0, self.lap_v0, self.bilap_u0, self.vspec.clone(), r_max);
        Ok(integrate_ivp(&spec)?)
    }

    /// `|v(r) − T(v)(r)|` at `n` probe radii between nodes.
    pub fn probe_residual(&self, n: usize) -> Result<f64, SolverError> {
        let g = &self.grid;
        let mut worst: f64 = 0.0;
        for k in 1..=n {
            let r = g.nodes[0] + (g.nodes[g.len() - 1] - g.nodes[0]) * (k as f64 - 0.5) / n as f64;
            let interp = self.v.eval(r)?;
            worst = worst.max((interp - self.v_at(r)).abs());
        }
        Ok(worst)
    }

    pub fn meta(&self) -> SolutionMeta {
        SolutionMeta {
            lambda: self.lambda,
            c: self.c,
            c_tilde: self.c_tilde(),
            u0: self.u0,
            lap_u0: self.lap_v0,
            bilap_u0: self.bilap_u0,
            total_target: self.total_target,
            total_achieved: self.total_achieved,
            sweeps: self.sweeps,
            residual: self.residual,
            method: self.method,
            tail_bound: self.tail_bound,
            nodes: self.grid.len(),
            r_max: self.grid.r_max(),
        }
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<(), SolverError> {
        serde_json::to_writer_pretty(w, &self.meta())?;
        Ok(())
    }

    /// Jets of the re-integrated profile at the quadrature nodes.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SolverError> {
        let traj = self.trajectory(self.grid.r_max())?;
        let jets: Vec<_> = std::iter::once(0.0)
            .chain(self.grid.nodes.iter().cloned())
            .filter(|&r| r <= traj.r_end())
            .filter_map(|r| traj.eval(r).ok())
            .collect();
        ode_shooter::ivp::write_jets_csv(w, &jets)?;
        Ok(())
    }
}

fn finish(
    sys: &System,
    vspec: &VSpec,
    v: Vec<f64>,
    e: Eval,
    sweeps: usize,
    method: Method,
    history: Vec<SweepRecord>,
) -> Result<EntireSolution, SolverError> {
    let grid = sys.disc.grid.clone();
    let residual = sup_diff(&v, &e.t);
    let u0 = dot(
        &e.f,
        &sys.wv
            .iter()
            .zip(&grid.nodes)
            .map(|(w, s)| -s.ln() * w)
            .collect::<Vec<_>>(),
    ) + e.c;
    let w1: Vec<f64> = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .map(|(s, w)| OMEGA5 * w * s)
        .collect();
    let bilap_u0 =
        16.0 / GAMMA6 * dot(&e.f, &w1) + 384.0 * sys.lambda * e.lap0 - 384.0;
    let total_achieved = dot(&e.f, &sys.wm);
    let r = grid.r_max();
    let last = *e.f.last().unwrap_or(&0.0);
    let tail_bound = OMEGA5 * last * r * r / 24.0;
    let field = RadialField::new(grid.radial_grid()?, v)?.with_parity(Parity::Even);
    Ok(EntireSolution {
        grid,
        vspec: vspec.clone(),
        v: field,
        density: e.f,
        c: e.c,
        lambda: sys.lambda,
        lap_v0: e.lap0,
        u0,
        bilap_u0,
        total_target: sys.total,
        total_achieved,
        sweeps,
        residual,
        method,
        history,
        tail_bound,
    })
}

fn picard(
    sys: &System,
    cfg: &FixedPointConfig,
    v0: &[f64],
    history: &mut Vec<SweepRecord>,
) -> Result<(Vec<f64>, Eval, usize), SolverError> {
    let mut v = v0.to_vec();
    let mut theta = cfg.damping;
    let mut prev = f64::INFINITY;
    let mut growth = 0;
    for sweep in 1..=cfg.max_sweeps {
        let e = match sys.eval(&v) {
            Ok(e) => e,
            Err(SolverError::RescaleFailure(_)) => {
                return Err(SolverError::Diverged { sweeps: sweep, theta })
            }
            Err(err) => return Err(err),
        };
        let upd = sup_diff(&v, &e.t);
        history.push(SweepRecord {
            method: Method::Picard,
            update: upd,
            damping: theta,
        });
        if !upd.is_finite() {
            return Err(SolverError::Diverged { sweeps: sweep, theta });
        }
        if upd < cfg.tol {
            return Ok((v, e, sweep));
        }
        growth = if upd > prev { growth + 1 } else { 0 };
        if growth >= 10 {
            theta *= 0.5;
            growth = 0;
            if theta < cfg.damping_floor {
                return Err(SolverError::Diverged { sweeps: sweep, theta });
            }
        }
        for (x, t) in v.iter_mut().zip(&e.t) {
            *x += theta * (t - *x);
        }
        prev = upd;
    }
    Err(SolverError::NoConvergence {
        iterations: cfg.max_sweeps,
        residual: prev,
    })
}

fn newton(
    sys: &System,
    cfg: &FixedPointConfig,
    v0: &[f64],
    history: &mut Vec<SweepRecord>,
) -> Result<(Vec<f64>, Eval, usize), SolverError> {
    let mut v = v0.to_vec();
    let mut e = sys.eval(&v)?;
    let mut norm = sup_diff(&v, &e.t);
    for it in 1..=cfg.max_newton {
        if norm < cfg.tol {
            return Ok((v, e, it - 1));
        }
        let dx = sys.newton_step(&v, &e)?;
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = v.iter().zip(&dx).map(|(x, d)| x + t * d).collect();
            let accepted = match sys.eval(&trial) {
                Ok(te) => {
                    let tn = sup_diff(&trial, &te.t);
                    if tn.is_finite() && (tn < (1.0 - 1e-4 * t) * norm || t < 1e-3) {
                        v = trial;
                        e = te;
                        norm = tn;
                        true
                    } else {
                        false
                    }
                }
                Err(_) => false,
            };
            if accepted {
                break;
            }
            t *= 0.5;
            if t < 1e-3 {
                return Err(SolverError::NoConvergence {
                    iterations: it,
                    residual: norm,
                });
            }
        }
        history.push(SweepRecord {
            method: Method::Newton,
            update: norm,
            damping: t,
        });
    }
    if norm < cfg.tol {
        return Ok((v, e, cfg.max_newton));
    }
    Err(SolverError::NoConvergence {
        iterations: cfg.max_newton,
        residual: norm,
    })
}

/// Solve on an existing discretisation, optionally warm-started.
pub fn solve_on(
    disc: &Discretization,
    vspec: &VSpec,
    cfg: &FixedPointConfig,
    warm: Option<&EntireSolution>,
) -> Result<EntireSolution, SolverError> {
    cfg.validate()?;
    let sys = System::new(disc, vspec, cfg.total, cfg.lambda)?;
    let v0: Vec<f64> = match warm {
        Some(w) if w.v.values().len() == disc.grid.len() => w.v.values().to_vec(),
        _ => vec![0.0; disc.grid.len()],
    };
    let mut history = Vec::new();
    match picard(&sys, cfg, &v0, &mut history) {
        Ok((v, e, n)) => finish(&sys, vspec, v, e, n, Method::Picard, history),
        Err(err) if cfg.newton_fallback => {
            let picard_sweeps = history.len();
            match newton(&sys, cfg, &v0, &mut history) {
                Ok((v, e, n)) => finish(
                    &sys,
                    vspec,
                    v,
                    e,
                    picard_sweeps + n,
                    Method::Newton,
                    history,
                ),
                Err(_) => Err(err),
            }
        }
        Err(err) => Err(err),
    }
}

/// Damped Picard iteration for `v`, with `c` fixed by the volume constraint
/// and `Δv(0)` by `(1+24λ)Δv(0) = −(4/γ₆)∫ V e^{6u}/|y|² dy` at every sweep.
pub fn picard_solve(vspec: &VSpec, cfg: &FixedPointConfig) -> Result<EntireSolution, SolverError> {
    cfg.validate()?;
    let disc = Discretization::new(&cfg.grid, cfg.kernel_order)?;
    solve_on(&disc, vspec, cfg, None)
}

/// Result of a sweep over decreasing λ.
#[derive(Debug)]
pub struct Continuation {
    pub solutions: Vec<EntireSolution>,
    /// Index into the λ list and the error that stopped the sweep.
    pub failure: Option<(usize, String)>,
}

impl Continuation {
    /// `(λ, u(0), λΔu(0), Δu(0))` per converged member.
    pub fn diagnostics(&self) -> Vec<(f64, f64, f64, f64)> {
        self.solutions
            .iter()
            .map(|s| (s.lambda, s.u0, s.lambda * s.lap_v0, s.lap_v0))
            .collect()
    }
}

/// Solve for each λ in turn, warm-starting from the previous solution.
pub fn lambda_continuation(
    vspec: &VSpec,
    base: &FixedPointConfig,
    lambdas: &[f64],
) -> Result<Continuation, SolverError> {
    if lambdas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(SolverError::InvalidConfig("lambdas must be decreasing".into()));
    }
    base.validate()?;
    let disc = Discretization::new(&base.grid, base.kernel_order)?;
    let mut out = Continuation {
        solutions: Vec::new(),
        failure: None,
    };
    for (i, &lambda) in lambdas.iter().enumerate() {
        let cfg = FixedPointConfig {
            lambda,
            ..base.clone()
        };
        match solve_on(&disc, vspec, &cfg, out.solutions.last()) {
            Ok(s) => out.solutions.push(s),
            Err(e) => {
                out.failure = Some((i, e.to_string()));
                break;
            }
        }
    }
    Ok(out)
}
