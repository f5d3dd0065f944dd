//! Closed-form radial profiles and their jets.

use crate::grid::{RadialField, RadialGrid};
use crate::jet::JetState;
use std::sync::Arc;

/// A radial function that can report its jet at any radius.
pub trait RadialProfile: Send + Sync {
    fn jet(&self, r: f64) -> JetState;

    fn value(&self, r: f64) -> f64 {
        self.jet(r).u()
    }

    /// `Δ³u(r)` when available in closed form.
    fn lap3(&self, _r: f64) -> Option<f64> {
        None
    }

    fn u0(&self) -> f64 {
        self.value(0.0)
    }

    /// Largest radius at which the profile is defined.
    fn support(&self) -> f64 {
        f64::INFINITY
    }

    fn sample(&self, grid: Arc<RadialGrid>) -> RadialField {
        RadialField::from_fn(grid, |r| self.value(r))
    }
}

impl<P: RadialProfile + ?Sized> RadialProfile for Box<P> {
    fn jet(&self, r: f64) -> JetState {
        (**self).jet(r)
    }
    fn value(&self, r: f64) -> f64 {
        (**self).value(r)
    }
    fn lap3(&self, r: f64) -> Option<f64> {
        (**self).lap3(r)
    }
    fn u0(&self) -> f64 {
        (**self).u0()
    }
    fn support(&self) -> f64 {
        (**self).support()
    }
}

impl<P: RadialProfile + ?Sized> RadialProfile for Arc<P> {
    fn jet(&self, r: f64) -> JetState {
        (**self).jet(r)
    }
    fn value(&self, r: f64) -> f64 {
        (**self).value(r)
    }
    fn lap3(&self, r: f64) -> Option<f64> {
        (**self).lap3(r)
    }
    fn u0(&self) -> f64 {
        (**self).u0()
    }
    fn support(&self) -> f64 {
        (**self).support()
    }
}

fn eta_jet(x: f64) -> [f64; 6] {
    let x2 = x * x;
    let q = 1.0 + x2;
    let q2 = q * q;
    let q3 = q2 * q;
    let q4 = q2 * q2;
    [
        (2.0 / q).ln(),
        -2.0 * x / q,
        -4.0 * (2.0 * x2 + 3.0) / q2,
        16.0 * x * (x2 + 2.0) / q3,
        32.0 * (x2 * x2 + 4.0 * x2 + 6.0) / q4,
        -128.0 * x * (x2 * x2 + 5.0 * x2 + 10.0) / (q4 * q),
    ]
}

/// The bubble `η(r/s) − log s`, with `η = log(2/(1+r²))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bubble {
    pub scale: f64,
}

impl Bubble {
    /// The spherical solution η itself.
    pub fn spherical() -> Self {
        Bubble { scale: 1.0 }
    }

    /// Bubble with prescribed maximum `u(0) = u0`, i.e. scale `r_k = 2e^{−u0}`.
    pub fn from_u0(u0: f64) -> Self {
        Bubble {
            scale: 2.0 * (-u0).exp(),
        }
    }
}

impl RadialProfile for Bubble {
    fn jet(&self, r: f64) -> JetState {
        let s = self.scale;
        let x = r / s;
        let mut w = eta_jet(x);
        w[0] -= s.ln();
        let mut p = 1.0;
        for v in w.iter_mut().skip(1) {
            p /= s;
            *v *= p;
        }
        JetState::new(r, w)
    }

    fn lap3(&self, r: f64) -> Option<f64> {
        let x = r / self.scale;
        let q = 1.0 + x * x;
        Some(-7680.0 / q.powi(6) / self.scale.powi(6))
    }

    fn u0(&self) -> f64 {
        std::f64::consts::LN_2 - self.scale.ln()
    }
}

/// `c0 + c2 r² + c4 r⁴`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Polynomial {
    pub c0: f64,
    pub c2: f64,
    pub c4: f64,
}

impl Polynomial {
    /// `φ = −(1 − r²)²`, the limiting polyharmonic profile.
    pub fn phi() -> Self {
        Polynomial {
            c0: -1.0,
            c2: 2.0,
            c4: -1.0,
        }
    }

    /// `β(φ + 1) = β(2r² − r⁴)`.
    pub fn phi_plus_one(beta: f64) -> Self {
        Polynomial {
            c0: 0.0,
            c2: 2.0 * beta,
            c4: -beta,
        }
    }
}

impl RadialProfile for Polynomial {
    fn jet(&self, r: f64) -> JetState {
        let r2 = r * r;
        JetState::new(
            r,
            [
                self.c0 + self.c2 * r2 + self.c4 * r2 * r2,
                2.0 * self.c2 * r + 4.0 * self.c4 * r2 * r,
                12.0 * self.c2 + 32.0 * self.c4 * r2,
                64.0 * self.c4 * r,
                384.0 * self.c4,
                0.0,
            ],
        )
    }

    fn lap3(&self, _r: f64) -> Option<f64> {
        Some(0.0)
    }
}

/// Sum of two profiles.
#[derive(Clone, Debug)]
pub struct Sum<A, B>(pub A, pub B);

impl<A: RadialProfile, B: RadialProfile> RadialProfile for Sum<A, B> {
    fn jet(&self, r: f64) -> JetState {
        self.0.jet(r).add(&self.1.jet(r))
    }
    fn value(&self, r: f64) -> f64 {
        self.0.value(r) + self.1.value(r)
    }
    fn lap3(&self, r: f64) -> Option<f64> {
        Some(self.0.lap3(r)? + self.1.lap3(r)?)
    }
    fn support(&self) -> f64 {
        self.0.support().min(self.1.support())
    }
}

/// The synthetic hybrid profile `η̄_k + β(φ + 1)` with `η̄_k` the bubble of height `u0`.
pub fn synthetic_hybrid(u0: f64, beta: f64) -> Sum<Bubble, Polynomial> {
    Sum(Bubble::from_u0(u0), Polynomial::phi_plus_one(beta))
}

/// `u(λr) + log λ`.
#[derive(Clone, Debug)]
pub struct Rescaled<P> {
    pub inner: P,
    pub lambda: f64,
}

impl<P: RadialProfile> RadialProfile for Rescaled<P> {
    fn jet(&self, r: f64) -> JetState {
        let mut j = self.inner.jet(self.lambda * r).rescaled(self.lambda);
        j.r = r;
        j
    }
    fn value(&self, r: f64) -> f64 {
        self.inner.value(self.lambda * r) + self.lambda.ln()
    }
    fn lap3(&self, r: f64) -> Option<f64> {
        Some(self.inner.lap3(self.lambda * r)? * self.lambda.powi(6))
    }
    fn support(&self) -> f64 {
        self.inner.support() / self.lambda
    }
}

/// Constant profile `u ≡ c`.
#[derive(Clone, Copy, Debug)]
pub struct ConstantProfile(pub f64);

impl RadialProfile for ConstantProfile {
    fn jet(&self, r: f64) -> JetState {
        JetState::new(r, [self.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    }
    fn lap3(&self, _r: f64) -> Option<f64> {
        Some(0.0)
    }
}

/// `Ψ = (1 − r²)/(1 + r²)`, the bounded kernel element of the linearized operator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KernelPsi;

impl RadialProfile for KernelPsi {
    fn jet(&self, r: f64) -> JetState {
        let r2 = r * r;
        let q = 1.0 + r2;
        let q2 = q * q;
        let q4 = q2 * q2;
        JetState::new(
            r,
            [
                (1.0 - r2) / q,
                -4.0 * r / q2,
                -8.0 * (r2 + 3.0) / (q2 * q),
                32.0 * r * (r2 + 4.0) / q4,
                768.0 / (q4 * q),
                -7680.0 * r / (q4 * q2),
            ],
        )
    }

    fn lap3(&self, r: f64) -> Option<f64> {
        let q = 1.0 + r * r;
        Some(46080.0 * (r * r - 1.0) / q.powi(7))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lap_fd<P: RadialProfile>(p: &P, r: f64, k: usize) -> f64 {
        // central differences of component k, used as Δ of that component
        let h = 1e-4 * r.max(1.0);
        let f = |x: f64| p.jet(x).w[k];
        let d1 = (f(r + h) - f(r - h)) / (2.0 * h);
        let d2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
        d2 + 5.0 * d1 / r
    }

    #[test]
    fn eta_at_origin() {
        let j = Bubble::spherical().jet(0.0);
        let expect = [std::f64::consts::LN_2, 0.0, -12.0, 0.0, 192.0, 0.0];
        for k in 0..6 {
            assert!((j.w[k] - expect[k]).abs() < 1e-14);
        }
        assert_eq!(Bubble::spherical().lap3(0.0), Some(-7680.0));
    }

    #[test]
    fn eta_taylor_series() {
        let r: f64 = 1e-3;
        let j = Bubble::spherical().jet(r);
        let r2 = r * r;
        assert!((j.lap() - (-12.0 + 16.0 * r2 - 20.0 * r2 * r2)).abs() < 1e-12);
        assert!((j.bilap() - (192.0 - 640.0 * r2)).abs() < 1e-8);
        let series = std::f64::consts::LN_2 - r2 + r2 * r2 / 2.0 - r2 * r2 * r2 / 3.0;
        assert!((j.u() - series).abs() < 1e-15);
    }

    #[test]
    fn jets_are_consistent() {
        let profiles: Vec<Box<dyn RadialProfile>> = vec![
            Box::new(Bubble::spherical()),
            Box::new(Bubble::from_u0(3.0)),
            Box::new(KernelPsi),
            Box::new(Polynomial::phi()),
        ];
        for p in &profiles {
            for r in [0.3, 0.9, 2.5] {
                for k in [0, 2, 4] {
                    let h = 1e-5;
                    let d = (p.jet(r + h).w[k] - p.jet(r - h).w[k]) / (2.0 * h);
                    let scale = 1.0 + p.jet(r).w[k + 1].abs();
                    assert!((d - p.jet(r).w[k + 1]).abs() < 1e-6 * scale);
                    let lap = lap_fd(p, r, k);
                    let next = if k < 4 { p.jet(r).w[k + 2] } else { p.lap3(r).unwrap() };
                    assert!((lap - next).abs() < 1e-4 * (1.0 + next.abs()), "k={k} r={r}");
                }
            }
        }
    }

    #[test]
    fn eta_solves_liouville() {
        let p = Bubble::spherical();
        for r in [0.0, 0.5, 1.0, 3.0] {
            let res = -p.lap3(r).unwrap() - 120.0 * (6.0 * p.value(r)).exp();
            assert!(res.abs() < 1e-10);
        }
    }

    #[test]
    fn psi_solves_linearized() {
        let e = Bubble::spherical();
        for r in [0.0, 0.4, 1.0, 2.0, 7.0] {
            let res = -KernelPsi.lap3(r).unwrap() - 720.0 * KernelPsi.value(r) * (6.0 * e.value(r)).exp();
            assert!(res.abs() < 1e-9);
        }
    }

    #[test]
    fn phi_constants() {
        let j = Polynomial::phi().jet(0.0);
        assert_eq!(j.lap(), 24.0);
        assert_eq!(Polynomial::phi().jet(0.7).bilap(), -384.0);
    }

    #[test]
    fn bubble_height() {
        let b = Bubble::from_u0(12.0);
        assert!((b.value(0.0) - 12.0).abs() < 1e-12);
        assert!((b.u0() - 12.0).abs() < 1e-12);
    }

    #[test]
    fn rescaled_bubble_is_bubble() {
        let lam = 7.0;
        let a = Rescaled {
            inner: Bubble::spherical(),
            lambda: lam,
        };
        let b = Bubble { scale: 1.0 / lam };
        for r in [0.0, 0.1, 0.5] {
            for k in 0..6 {
                let x = a.jet(r).w[k];
                let y = b.jet(r).w[k];
                assert!((x - y).abs() < 1e-10 * (1.0 + y.abs()));
            }
        }
    }
}
