use serde::{Deserialize, Serialize};

/// `(u, u', Δu, (Δu)', Δ²u, (Δ²u)')` at one radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetState {
    pub r: f64,
    pub w: [f64; 6],
}

impl JetState {
    pub fn new(r: f64, w: [f64; 6]) -> Self {
        JetState { r, w }
    }

    /// Jet at the origin; odd components vanish by radial smoothness.
    pub fn at_origin(u0: f64, lap_u0: f64, bilap_u0: f64) -> Self {
        JetState {
            r: 0.0,
            w: [u0, 0.0, lap_u0, 0.0, bilap_u0, 0.0],
        }
    }

    pub fn u(&self) -> f64 {
        self.w[0]
    }
    pub fn du(&self) -> f64 {
        self.w[1]
    }
    pub fn lap(&self) -> f64 {
        self.w[2]
    }
    pub fn dlap(&self) -> f64 {
        self.w[3]
    }
    pub fn bilap(&self) -> f64 {
        self.w[4]
    }
    pub fn dbilap(&self) -> f64 {
        self.w[5]
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut w = self.w;
        w.iter_mut().for_each(|x| *x *= c);
        JetState { r: self.r, w }
    }

    pub fn add(&self, other: &JetState) -> Self {
        let mut w = self.w;
        for (a, b) in w.iter_mut().zip(other.w) {
            *a += b;
        }
        JetState { r: self.r, w }
    }

    /// Jet of `u(λ r) + log λ` at radius `r / λ` given the jet of `u` at `r`.
    pub fn rescaled(&self, lambda: f64) -> Self {
        let mut w = self.w;
        w[0] += lambda.ln();
        let mut p = 1.0;
        for x in w.iter_mut().skip(1) {
            p *= lambda;
            *x *= p;
        }
        JetState {
            r: self.r / lambda,
            w,
        }
    }
}
