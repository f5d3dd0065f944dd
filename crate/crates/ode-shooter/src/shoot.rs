//! Shooting on the initial data at the origin.

use crate::error::OdeError;
use crate::ivp::{integrate_ivp, IvpSpec, Trajectory};
use serde::{Deserialize, Serialize};

/// Residual used when the trajectory does not reach a target radius.
const BLOWUP_RESIDUAL: f64 = 1e300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// `u(r) = value`
    Value { r: f64, value: f64 },
    /// `u'(r) = value`
    Slope { r: f64, value: f64 },
    /// Curvature over `B_r` equals `value`.
    Curvature { r: f64, value: f64 },
}

impl Target {
    pub fn radius(&self) -> f64 {
        match *self {
            Target::Value { r, .. } | Target::Slope { r, .. } | Target::Curvature { r, .. } => r,
        }
    }

    fn residual(&self, traj: &Trajectory) -> f64 {
        let r = self.radius();
        if r > traj.r_end() {
            return BLOWUP_RESIDUAL;
        }
        let got = match *self {
            Target::Value { r, .. } => traj.eval(r).map(|j| j.u()),
            Target::Slope { r, .. } => traj.eval(r).map(|j| j.du()),
            Target::Curvature { r, .. } => traj.mass(r),
        };
        match got {
            Ok(x) if x.is_finite() => x - self.value(),
            _ => BLOWUP_RESIDUAL,
        }
    }

    fn value(&self) -> f64 {
        match *self {
            Target::Value { value, .. }
            | Target::Slope { value, .. }
            | Target::Curvature { value, .. } => value,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeVar {
    U0,
    LapU0,
    BilapU0,
}

impl FreeVar {
    fn get(self, s: &IvpSpec) -> f64 {
        match self {
            FreeVar::U0 => s.u0,
            FreeVar::LapU0 => s.lap_u0,
            FreeVar::BilapU0 => s.bilap_u0,
        }
    }

    fn set(self, s: &mut IvpSpec, x: f64) {
        match self {
            FreeVar::U0 => s.u0 = x,
            FreeVar::LapU0 => s.lap_u0 = x,
            FreeVar::BilapU0 => s.bilap_u0 = x,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootOptions {
    /// One bracket per free variable.
    pub brackets: Vec<(f64, f64)>,
    /// Tolerance on the free variables.
    pub x_tol: f64,
    /// Tolerance on the residuals (multi-dimensional case).
    pub f_tol: f64,
    pub max_iter: usize,
}

impl ShootOptions {
    pub fn with_bracket(lo: f64, hi: f64) -> Self {
        ShootOptions {
            brackets: vec![(lo, hi)],
            ..ShootOptions::default()
        }
    }
}

impl Default for ShootOptions {
    fn default() -> Self {
        ShootOptions {
            brackets: Vec::new(),
            x_tol: 1e-11,
            f_tol: 1e-9,
            max_iter: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootResult {
    pub spec: IvpSpec,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

fn residuals(spec: &IvpSpec, targets: &[Target]) -> Result<Vec<f64>, OdeError> {
    let r_needed = targets.iter().map(Target::radius).fold(0.0, f64::max);
    let mut s = spec.clone();
    s.r_max = s.r_max.max(r_needed);
    s.events.clear();
    let traj = integrate_ivp(&s)?;
    Ok(targets.iter().map(|t| t.residual(&traj)).collect())
}

/// Adjust the free initial values until every target holds.
///
/// One free variable uses Brent's method inside its bracket; more use
/// Newton with a finite-difference Jacobian started at the bracket midpoints.
pub fn shoot(
    base: &IvpSpec,
    targets: &[Target],
    free: &[FreeVar],
    opts: &ShootOptions,
) -> Result<ShootResult, OdeError> {
    if targets.len() != free.len() {
        return Err(OdeError::InvalidSpec(format!(
            "{} constraints for {} free values",
            targets.len(),
            free.len()
        )));
    }
    base.validate()?;
    if free.is_empty() {
        return Ok(ShootResult {
            spec: base.clone(),
            residuals: Vec::new(),
            iterations: 0,
        });
    }
    if opts.brackets.len() != free.len() {
        return Err(OdeError::InvalidSpec(format!(
            "{} brackets for {} free values",
            opts.brackets.len(),
            free.len()
        )));
    }
    if free.len() == 1 {
        shoot_1d(base, &targets[0], free[0], opts)
    } else {
        shoot_newton(base, targets, free, opts)
    }
}

fn shoot_1d(
    base: &IvpSpec,
    target: &Target,
    var: FreeVar,
    opts: &ShootOptions,
) -> Result<ShootResult, OdeError> {
    let eval = |x: f64| -> Result<f64, OdeError> {
        let mut s = base.clone();
        var.set(&mut s, x);
        Ok(residuals(&s, std::slice::from_ref(target))?[0])
    };
    let (lo, hi) = opts.brackets[0];
    let (x, iterations) = brent(eval, lo, hi, opts.x_tol, opts.max_iter)?;
    let mut spec = base.clone();
    var.set(&mut spec, x);
    let residuals = residuals(&spec, std::slice::from_ref(target))?;
    Ok(ShootResult {
        spec,
        residuals,
        iterations,
    })
}

/// Brent's method; returns the root and the iteration count.
pub fn brent<F: FnMut(f64) -> Result<f64, OdeError>>(
    mut f: F,
    lo: f64,
    hi: f64,
    x_tol: f64,
    max_iter: usize,
) -> Result<(f64, usize), OdeError> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok((a, 0));
    }
    if fb == 0.0 {
        return Ok((b, 0));
    }
    if fa.signum() == fb.signum() {
        return Err(OdeError::BracketFailure {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for it in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok((b, it));
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(OdeError::NoConvergence {
        iterations: max_iter,
        residual: fb.abs(),
    })
}

fn shoot_newton(
    base: &IvpSpec,
    targets: &[Target],
    free: &[FreeVar],
    opts: &ShootOptions,
) -> Result<ShootResult, OdeError> {
    let n = free.len();
    let mut spec = base.clone();
    for (v, (lo, hi)) in free.iter().zip(&opts.brackets) {
        v.set(&mut spec, 0.5 * (lo + hi));
    }
    let mut f = residuals(&spec, targets)?;
    for it in 1..=opts.max_iter {
        let norm = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if norm <= opts.f_tol {
            return Ok(ShootResult {
                spec,
                residuals: f,
                iterations: it - 1,
            });
        }
        let mut jac = vec![vec![0.0; n]; n];
        for (j, v) in free.iter().enumerate() {
            let x = v.get(&spec);
            let h = 1e-7 * (1.0 + x.abs());
            let mut sp = spec.clone();
            v.set(&mut sp, x + h);
            let fp = residuals(&sp, targets)?;
            for i in 0..n {
                jac[i][j] = (fp[i] - f[i]) / h;
            }
        }
        let dx = solve(jac, f.iter().map(|x| -x).collect()).ok_or(OdeError::NoConvergence {
            iterations: it,
            residual: norm,
        })?;
        // halve the step until the residual decreases
        let mut t = 1.0;
        loop {
            let mut trial = spec.clone();
            for (v, d) in free.iter().zip(&dx) {
                v.set(&mut trial, v.get(&spec) + t * d);
            }
            let ft = residuals(&trial, targets)?;
            let nt = ft.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            if nt < norm || t < 1e-6 {
                spec = trial;
                f = ft;
                break;
            }
            t *= 0.5;
        }
        let step = dx.iter().fold(0.0f64, |m, x| m.max(x.abs())) * t;
        if step <= opts.x_tol {
            return Ok(ShootResult {
                spec,
                residuals: f,
                iterations: it,
            });
        }
    }
    Err(OdeError::NoConvergence {
        iterations: opts.max_iter,
        residual: f.iter().fold(0.0f64, |m, x| m.max(x.abs())),
    })
}

fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k] == 0.0 || !a[p][k].is_finite() {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let m = a[i][k] / a[k][k];
            for j in k..n {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let (x, _) = brent(|x| Ok(x * x * x - 2.0), 0.0, 3.0, 1e-14, 100).unwrap();
        assert!((x - 2f64.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn brent_reports_bad_bracket() {
        let err = brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 50).unwrap_err();
        assert!(matches!(err, OdeError::BracketFailure { .. }));
    }

    #[test]
    fn zero_free_returns_input() {
        let spec = IvpSpec::spherical(5.0);
        let out = shoot(&spec, &[], &[], &ShootOptions::default()).unwrap();
        assert_eq!(out.spec, spec);
    }

    #[test]
    fn mismatched_counts_rejected() {
        let spec = IvpSpec::spherical(5.0);
        let t = Target::Value { r: 1.0, value: 0.0 };
        assert!(shoot(&spec, &[t], &[], &ShootOptions::default()).is_err());
    }

    #[test]
    fn small_linear_solve() {
        let x = solve(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
    }
}
