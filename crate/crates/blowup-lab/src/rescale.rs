//! The concentration-scale profile `η_k(x) = u(r_k x) + log r_k`, `r_k = 2e^{−u(0)}`.

use crate::error::LabError;
use radial_core::profiles::{Bubble, Rescaled};
use radial_core::{RadialField, RadialProfile};
use std::sync::Arc;

/// Fewest field nodes that must land in `[0, x_max]` after rescaling.
pub const MIN_NODES: usize = 16;

pub fn concentration_radius(u0: f64) -> f64 {
    2.0 * (-u0).exp()
}

/// `ε_k = u(0) e^{−2u(0)}`.
pub fn eps_k(u0: f64) -> f64 {
    u0 * (-2.0 * u0).exp()
}

/// `η_k` on the nodes of `u` divided by `r_k`, truncated to `[0, x_max]`.
///
/// No interpolation takes place, so `η_k(0) = log 2` and scaling round trips
/// are exact up to rounding.
pub fn rescaled_profile(u: &RadialField, x_max: f64) -> Result<RadialField, LabError> {
    let nodes = u.nodes();
    if nodes.first() != Some(&0.0) {
        return Err(LabError::RefineGrid("field has no node at the origin".into()));
    }
    if !(x_max > 0.0) {
        return Err(LabError::InvalidInput(format!("x_max = {x_max}")));
    }
    let u0 = u.values()[0];
    let rk = concentration_radius(u0);
    let shift = rk.ln();
    let mut r = Vec::new();
    let mut v = Vec::new();
    for (&s, &val) in nodes.iter().zip(u.values()) {
        let x = s / rk;
        if x > x_max * (1.0 + 1e-12) {
            break;
        }
        r.push(x);
        v.push(val + shift);
    }
    if r.len() < MIN_NODES {
        return Err(LabError::RefineGrid(format!(
            "only {} nodes inside r_k x_max = {:e}",
            r.len(),
            rk * x_max
        )));
    }
    v[0] = std::f64::consts::LN_2;
    let grid = radial_core::RadialGrid::new(r, radial_core::Grading::Custom)?;
    Ok(RadialField::new(Arc::new(grid), v)?.with_order(u.order())?)
}

/// `η_k` as a profile, for jets.
pub fn rescaled_jets<P: RadialProfile>(u: P) -> Rescaled<P> {
    let rk = concentration_radius(u.u0());
    Rescaled {
        inner: u,
        lambda: rk,
    }
}

/// `sup |η_k − η|` over the nodes of a rescaled field.
pub fn distance_to_eta(eta_k: &RadialField) -> f64 {
    let eta = Bubble::spherical();
    eta_k
        .nodes()
        .iter()
        .zip(eta_k.values())
        .map(|(&x, &v)| (v - eta.value(x)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::RadialGrid;

    fn eta_field() -> RadialField {
        let g = Arc::new(RadialGrid::refined(1e-3, 1.1, 0.05, 20.0).unwrap());
        Bubble::spherical().sample(g)
    }

    #[test]
    fn eta_is_fixed() {
        let u = eta_field();
        let e = rescaled_profile(&u, 10.0).unwrap();
        assert_eq!(e.values()[0], std::f64::consts::LN_2);
        assert!(distance_to_eta(&e) < 1e-15);
    }

    #[test]
    fn coarse_field_rejected() {
        let u = Bubble::from_u0(12.0).sample(Arc::new(RadialGrid::uniform(1.0, 50).unwrap()));
        assert!(matches!(rescaled_profile(&u, 5.0), Err(LabError::RefineGrid(_))));
    }
}
