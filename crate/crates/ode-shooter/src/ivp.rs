//! Initial-value integration from the origin.

use crate::dopri::{self, DenseStep, State};
use crate::error::OdeError;
use crate::events::{Crossing, Direction, EventLog, Quantity};
use radial_core::constants::OMEGA5;
use radial_core::{JetState, RadialError, RadialGrid, RadialProfile, VSpec};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// First radius reached by the Taylor start.
pub const R_START: f64 = 1e-6;
/// Switch to the concentration-scale variables above this `u(0)`.
pub const GAUGE_THRESHOLD: f64 = 20.0;
/// Working-variable `u` above which the run is reported as blown up.
pub const BLOWUP_CAP: f64 = 100.0;
const MAX_STEPS: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel: 1e-11,
            abs: 1e-14,
        }
    }
}

impl Tolerances {
    pub fn scaled(&self, factor: f64) -> Self {
        Tolerances {
            rel: self.rel * factor,
            abs: self.abs * factor,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IvpSpec {
    pub u0: f64,
    pub lap_u0: f64,
    pub bilap_u0: f64,
    pub v: VSpec,
    pub r_max: f64,
    #[serde(default)]
    pub tol: Tolerances,
    #[serde(default = "all_quantities")]
    pub events: Vec<Quantity>,
}

fn all_quantities() -> Vec<Quantity> {
    Quantity::ALL.to_vec()
}

impl IvpSpec {
    pub fn new(u0: f64, lap_u0: f64, bilap_u0: f64, v: VSpec, r_max: f64) -> Self {
        IvpSpec {
            u0,
            lap_u0,
            bilap_u0,
            v,
            r_max,
            tol: Tolerances::default(),
            events: all_quantities(),
        }
    }

    /// Initial data of the standard bubble η with `V ≡ 120`.
    pub fn spherical(r_max: f64) -> Self {
        IvpSpec::new(std::f64::consts::LN_2, -12.0, 192.0, VSpec::standard(), r_max)
    }

    pub fn with_tol(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<(), OdeError> {
        if !(self.r_max > 0.0) || !self.r_max.is_finite() {
            return Err(OdeError::InvalidSpec(format!("r_max = {}", self.r_max)));
        }
        if !(self.tol.rel > 0.0 && self.tol.abs > 0.0) {
            return Err(OdeError::InvalidSpec(format!(
                "tolerances must be positive, got {:?}",
                self.tol
            )));
        }
        for (name, x) in [
            ("u0", self.u0),
            ("lap_u0", self.lap_u0),
            ("bilap_u0", self.bilap_u0),
        ] {
            if !x.is_finite() {
                return Err(OdeError::InvalidSpec(format!("{name} = {x}")));
            }
        }
        if !(6.0 * self.u0).exp().is_finite() {
            return Err(OdeError::InvalidSpec(format!(
                "e^(6 u0) overflows for u0 = {}",
                self.u0
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IvpStatus {
    Completed,
    FiniteRadiusBlowup { r: f64 },
    StiffnessFailure { r: f64 },
}

impl IvpStatus {
    pub fn is_complete(&self) -> bool {
        matches!(self, IvpStatus::Completed)
    }
}

/// Even data at the origin; `lap3_u0 = Δ³u(0)` comes from the right side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemStart {
    pub u0: f64,
    pub lap_u0: f64,
    pub bilap_u0: f64,
    pub lap3_u0: f64,
}

/// Taylor jet `u0 + (Δu0/12) r² + (Δ²u0/384) r⁴ + (Δ³u0/23040) r⁶` and its derivatives.
pub fn series_jet(start: &SystemStart, r: f64) -> JetState {
    let (a, b, c) = (start.lap_u0, start.bilap_u0, start.lap3_u0);
    let r2 = r * r;
    let r3 = r2 * r;
    let r4 = r2 * r2;
    let r5 = r4 * r;
    JetState::new(
        r,
        [
            start.u0 + a / 12.0 * r2 + b / 384.0 * r4 + c / 23040.0 * r4 * r2,
            a / 6.0 * r + b / 96.0 * r3 + c / 3840.0 * r5,
            a + b / 12.0 * r2 + c / 384.0 * r4,
            b / 6.0 * r + c / 96.0 * r3,
            b + c / 12.0 * r2,
            c / 6.0 * r,
        ],
    )
}

/// Piecewise dense solution of one run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub status: IvpStatus,
    /// Crossing radii in physical units.
    pub events: EventLog,
    /// Physical radius per working radius.
    scale: f64,
    start: SystemStart,
    x_start: f64,
    steps: Vec<DenseStep>,
    states: Vec<JetState>,
}

impl Trajectory {
    /// Accepted states in physical units, starting at the series radius.
    pub fn states(&self) -> &[JetState] {
        &self.states
    }

    /// Last radius reached.
    pub fn r_end(&self) -> f64 {
        self.states.last().map_or(0.0, |s| s.r)
    }

    /// Physical radius of one working-variable unit (1 unless the gauge was used).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn start(&self) -> &SystemStart {
        &self.start
    }

    pub fn u0(&self) -> f64 {
        self.eval(0.0).map(|j| j.u()).unwrap_or(f64::NAN)
    }

    /// Jet at radius `r` from the series start or the dense output.
    pub fn eval(&self, r: f64) -> Result<JetState, OdeError> {
        if !(r >= 0.0) || r > self.r_end() * (1.0 + 1e-14) {
            return Err(RadialError::OutOfRange {
                r,
                lo: 0.0,
                hi: self.r_end(),
            }
            .into());
        }
        let x = r / self.scale;
        let w = if x <= self.x_start || self.steps.is_empty() {
            series_jet(&self.start, x)
        } else {
            let i = self.steps.partition_point(|s| s.x1() < x);
            let step = &self.steps[i.min(self.steps.len() - 1)];
            JetState::new(x, step.eval(x))
        };
        Ok(self.to_physical(w))
    }

    fn to_physical(&self, w: JetState) -> JetState {
        if self.scale == 1.0 {
            w
        } else {
            w.rescaled(1.0 / self.scale)
        }
    }

    /// `ω₅ ∫_{B_r} (−Δ³u)` in flux form, `−ω₅ r⁵ (Δ²u)'(r)`.
    pub fn mass(&self, r: f64) -> Result<f64, OdeError> {
        let j = self.eval(r)?;
        Ok(-OMEGA5 * r.powi(5) * j.dbilap())
    }

    /// Samples at the grid nodes inside the trajectory.
    pub fn sample_jets(&self, grid: &RadialGrid) -> Vec<JetState> {
        grid.nodes()
            .iter()
            .filter(|&&r| r <= self.r_end())
            .filter_map(|&r| self.eval(r).ok())
            .collect()
    }

    /// CSV `r,u,du,lap_u,dlap_u,bilap_u,dbilap_u` at the accepted steps.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), OdeError> {
        let mut origin = vec![self.to_physical(series_jet(&self.start, 0.0))];
        origin.extend_from_slice(&self.states);
        write_jets_csv(w, &origin)
    }
}

/// Write jets with the trajectory CSV header.
pub fn write_jets_csv<W: Write>(w: W, jets: &[JetState]) -> Result<(), OdeError> {
    let mut wtr = csv::Writer::from_writer(w);
    let header = ["r", "u", "du", "lap_u", "dlap_u", "bilap_u", "dbilap_u"];
    wtr.write_record(header).map_err(RadialError::from)?;
    for j in jets {
        let mut rec = vec![format!("{:.17e}", j.r)];
        rec.extend(j.w.iter().map(|x| format!("{x:.17e}")));
        wtr.write_record(&rec).map_err(RadialError::from)?;
    }
    wtr.flush().map_err(|e| RadialError::Csv(e.to_string()))?;
    Ok(())
}

impl RadialProfile for Trajectory {
    fn jet(&self, r: f64) -> JetState {
        self.eval(r)
            .unwrap_or_else(|_| JetState::new(r, [f64::NAN; 6]))
    }

    fn u0(&self) -> f64 {
        Trajectory::u0(self)
    }

    fn support(&self) -> f64 {
        self.r_end()
    }
}

fn rhs<S: Fn(f64, f64) -> f64>(source: &S, x: f64, y: &State) -> State {
    let inv = 5.0 / x;
    [
        y[1],
        y[2] - inv * y[1],
        y[3],
        y[4] - inv * y[3],
        y[5],
        source(x, y[0]) - inv * y[5],
    ]
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Integrate `Δ³u = S(r, u)` outward from the even data at 0.
///
/// The run stops early, with a status flag, if `u` exceeds `blowup_cap` or
/// the step size underflows.
#[allow(clippy::too_many_arguments)]
pub fn integrate_system<S: Fn(f64, f64) -> f64>(
    source: S,
    u0: f64,
    lap_u0: f64,
    bilap_u0: f64,
    r_max: f64,
    tol: Tolerances,
    events: &[Quantity],
    blowup_cap: f64,
) -> Result<Trajectory, OdeError> {
    if !(r_max > 0.0) {
        return Err(OdeError::InvalidSpec(format!("r_max = {r_max}")));
    }
    let lap3_u0 = source(0.0, u0);
    if !lap3_u0.is_finite() {
        return Err(OdeError::InvalidSpec(format!(
            "right side at the origin is {lap3_u0}"
        )));
    }
    let start = SystemStart {
        u0,
        lap_u0,
        bilap_u0,
        lap3_u0,
    };
    let x_start = R_START.min(0.5 * r_max);
    let f = |x: f64, y: &State| rhs(&source, x, y);

    let mut x = x_start;
    let mut y = series_jet(&start, x).w;
    let mut k1 = f(x, &y);
    let mut traj = Trajectory {
        status: IvpStatus::Completed,
        events: EventLog::default(),
        scale: 1.0,
        start,
        x_start,
        steps: Vec::new(),
        states: vec![JetState::new(x, y)],
    };
    let mut last_sign: Vec<f64> = events.iter().map(|q| sign(y[q.index()])).collect();

    let span = r_max - x_start;
    let h_max = span / 50.0;
    let mut h = x_start.min(h_max);
    let mut n_steps = 0;
    while x < r_max {
        n_steps += 1;
        if n_steps > MAX_STEPS {
            traj.status = IvpStatus::StiffnessFailure { r: x };
            break;
        }
        let last = x + h >= r_max;
        if last {
            h = r_max - x;
        }
        let trial = dopri::step(&f, x, &y, &k1, h, tol.rel, tol.abs);
        let finite = trial.y.iter().chain(&trial.k_end).all(|v| v.is_finite());
        if !finite || trial.err > 1.0 {
            let fac = if finite {
                (0.9 * trial.err.powf(-0.2)).max(0.2)
            } else {
                0.25
            };
            h *= fac;
            if h < 1e-14 * x.max(1e-300) {
                traj.status = if !finite || y[0] > 0.5 * blowup_cap {
                    IvpStatus::FiniteRadiusBlowup { r: x }
                } else {
                    IvpStatus::StiffnessFailure { r: x }
                };
                break;
            }
            continue;
        }
        let x_new = if last { r_max } else { x + h };
        for (slot, q) in events.iter().enumerate() {
            let i = q.index();
            let s = sign(trial.y[i]);
            if s != 0.0 && last_sign[slot] != 0.0 && s != last_sign[slot] {
                let root = polish(&f, x, &y, &k1, h, i, last_sign[slot]);
                let direction = if s > 0.0 {
                    Direction::Rising
                } else {
                    Direction::Falling
                };
                traj.events.get_mut(*q).push(Crossing { r: root, direction });
            }
            if s != 0.0 {
                last_sign[slot] = s;
            }
        }
        traj.steps.push(trial.dense);
        x = x_new;
        y = trial.y;
        k1 = trial.k_end;
        traj.states.push(JetState::new(x, y));
        if y[0] > blowup_cap {
            traj.status = IvpStatus::FiniteRadiusBlowup { r: x };
            break;
        }
        let fac = if trial.err > 0.0 {
            (0.9 * trial.err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * fac).min(h_max);
    }
    Ok(traj)
}

/// Bisection on single re-steps from the start of the bracketing step.
fn polish<F: Fn(f64, &State) -> State>(
    f: &F,
    x0: f64,
    y0: &State,
    k1: &State,
    h: f64,
    idx: usize,
    sign_lo: f64,
) -> f64 {
    let mut lo = 0.0;
    let mut hi = h;
    for _ in 0..200 {
        if hi - lo <= 1e-13 * (x0 + hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let s = dopri::step(f, x0, y0, k1, mid, 0.0, 1.0);
        let v = s.y[idx];
        if v == 0.0 {
            return x0 + mid;
        }
        if sign(v) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    x0 + 0.5 * (lo + hi)
}

/// Integrate `(−Δ)³u = V e^{6u}` from `(u0, Δu0, Δ²u0)`.
///
/// For `u0 > 20` the run uses `ũ(x) = u(r_k x) + log r_k` with `r_k = 2e^{−u0}`
/// and maps results back.
pub fn integrate_ivp(spec: &IvpSpec) -> Result<Trajectory, OdeError> {
    spec.validate()?;
    let v = &spec.v;
    if spec.u0 <= GAUGE_THRESHOLD {
        let source = |r: f64, u: f64| -v.value(r) * (6.0 * u).exp();
        return integrate_system(
            source,
            spec.u0,
            spec.lap_u0,
            spec.bilap_u0,
            spec.r_max,
            spec.tol,
            &spec.events,
            BLOWUP_CAP,
        );
    }
    let rk = 2.0 * (-spec.u0).exp();
    let source = |x: f64, u: f64| -v.value(rk * x) * (6.0 * u).exp();
    let origin = JetState::at_origin(spec.u0, spec.lap_u0, spec.bilap_u0).rescaled(rk);
    let mut traj = integrate_system(
        source,
        origin.u(),
        origin.lap(),
        origin.bilap(),
        spec.r_max / rk,
        spec.tol,
        &spec.events,
        BLOWUP_CAP,
    )?;
    traj.scale = rk;
    traj.events = traj.events.scaled(rk);
    traj.states = traj
        .states
        .iter()
        .map(|s| s.rescaled(1.0 / rk))
        .collect();
    traj.status = match traj.status {
        IvpStatus::Completed => IvpStatus::Completed,
        IvpStatus::FiniteRadiusBlowup { r } => IvpStatus::FiniteRadiusBlowup { r: r * rk },
        IvpStatus::StiffnessFailure { r } => IvpStatus::StiffnessFailure { r: r * rk },
    };
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::constants::LAMBDA1;
    use radial_core::spherical_profile;

    #[test]
    fn spherical_solution_matches_eta() {
        let traj = integrate_ivp(&IvpSpec::spherical(10.0)).unwrap();
        assert!(traj.status.is_complete());
        let mut worst: f64 = 0.0;
        for i in 0..=2000 {
            let r = 10.0 * i as f64 / 2000.0;
            let a = traj.eval(r).unwrap();
            let b = spherical_profile(r);
            for k in 0..6 {
                worst = worst.max((a.w[k] - b.w[k]).abs());
            }
        }
        assert!(worst < 1e-6, "sup error {worst:e}");
        assert!((traj.mass(10.0).unwrap() / LAMBDA1 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn zero_data_gives_zero() {
        let spec = IvpSpec::new(0.0, 0.0, 0.0, VSpec::constant(0.0), 5.0);
        let traj = integrate_ivp(&spec).unwrap();
        assert!(traj.states().iter().all(|s| s.w.iter().all(|&x| x == 0.0)));
        assert!(traj.events.is_empty());
    }

    #[test]
    fn series_start_is_consistent() {
        let start = SystemStart {
            u0: 0.3,
            lap_u0: -2.0,
            bilap_u0: 5.0,
            lap3_u0: -7.0,
        };
        // Δ of the series u must reproduce the series Δu up to the truncated order
        let r = 1e-2;
        let j = series_jet(&start, r);
        let h = 1e-5;
        let jp = series_jet(&start, r + h);
        let jm = series_jet(&start, r - h);
        let upp = (jp.u() - 2.0 * j.u() + jm.u()) / (h * h);
        assert!((upp + 5.0 * j.du() / r - j.lap()).abs() < 1e-5);
        let lpp = (jp.lap() - 2.0 * j.lap() + jm.lap()) / (h * h);
        assert!((lpp + 5.0 * j.dlap() / r - j.bilap()).abs() < 1e-4);
    }

    #[test]
    fn gauge_switch_matches_direct_run() {
        let u0 = 20.5f64;
        let rk = 2.0 * (-u0).exp();
        let bubble = |r: f64| spherical_profile(r / rk).rescaled(1.0 / rk);
        let j0 = bubble(0.0);
        let spec = IvpSpec::new(u0, j0.lap(), j0.bilap(), VSpec::standard(), 50.0 * rk);
        let traj = integrate_ivp(&spec).unwrap();
        assert!((traj.scale() - rk).abs() < 1e-30);
        let direct = integrate_ivp(&IvpSpec::spherical(50.0)).unwrap();
        for t in [0.1, 1.0, 7.0, 40.0] {
            let a = traj.eval(t * rk).unwrap();
            let b = bubble(t * rk);
            assert!((a.u() - b.u()).abs() < 1e-6, "t={t}");
            let c = direct.eval(t).unwrap();
            let aw = a.rescaled(rk);
            assert!((aw.r - t).abs() < 1e-12 * t);
            for k in 0..6 {
                assert!((aw.w[k] - c.w[k]).abs() <= 1e-7, "t={t} k={k} {:e}", aw.w[k] - c.w[k]);
            }
        }
    }

    #[test]
    fn negative_curvature_blows_up() {
        let mut spec = IvpSpec::spherical(50.0);
        spec.v = VSpec::constant(-120.0);
        spec.u0 = 2.0;
        spec.bilap_u0 = 5000.0;
        let traj = integrate_ivp(&spec).unwrap();
        assert!(matches!(traj.status, IvpStatus::FiniteRadiusBlowup { .. }));
        assert!(traj.r_end() < 50.0);
    }

    #[test]
    fn csv_header() {
        let traj = integrate_ivp(&IvpSpec::spherical(1.0)).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("r,u,du,lap_u,dlap_u,bilap_u,dbilap_u\n"));
    }
}
