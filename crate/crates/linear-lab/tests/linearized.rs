use linear_lab::linearized::fit_far_field;
use linear_lab::*;
use proptest::prelude::*;
use radial_core::constants::{GAMMA6, LAMBDA1};
use radial_core::profiles::KernelPsi;
use radial_core::RadialProfile;
use std::time::Instant;

#[test]
fn kernel_jet_reproduces_psi() {
    let j = KernelPsi.jet(0.0);
    assert_eq!((j.u(), j.lap(), j.bilap()), (1.0, -24.0, 768.0));
    let traj = integrate_linear(1.0, -24.0, 768.0, 10.0).unwrap();
    for k in 0..=100 {
        let r = 0.1 * k as f64;
        let e = (traj.value(r) - exact_kernel_solution(r)).abs();
        assert!(e < 1e-6, "r={r}: {e:e}");
    }
}

#[test]
fn kernel_residual_against_finite_differences() {
    let h = 1e-3;
    for r in [0.5, 1.0, 3.0] {
        let b = |x: f64| KernelPsi.jet(x).bilap();
        let d1 = (b(r + h) - b(r - h)) / (2.0 * h);
        let d2 = (b(r + h) - 2.0 * b(r) + b(r - h)) / (h * h);
        let lap3 = d2 + 5.0 * d1 / r;
        let eta = 2f64.ln() - (1.0 + r * r).ln();
        let res = -lap3 - 720.0 * exact_kernel_solution(r) * (6.0 * eta).exp();
        assert!(res.abs() / 46080.0 < 1e-6, "r={r}: {res:e}");
        assert!(kernel_operator_residual(r).abs() < 1e-6);
    }
}

#[test]
fn kernel_has_zero_alpha() {
    assert!(kernel_alpha_integral().unwrap().abs() < 1e-6);
}

#[test]
fn generic_data_satisfies_identity() {
    let s = solve_linearized(1.0, 0.0, 200.0).unwrap();
    assert!(s.identity_residual() < 1e-2, "{:?}", s.fit);
    assert!(s.alpha_mismatch() < 1e-2);
    assert!(s.condition < 1e10);
}

#[test]
fn bounded_data_is_a_multiple_of_psi() {
    let gamma = 2.5;
    let traj = integrate_linear(gamma, -24.0 * gamma, 768.0 * gamma, 200.0).unwrap();
    let (fit, _, _) = fit_far_field(&traj, 200.0).unwrap();
    assert!(fit.a.abs() < 1e-8 && fit.b.abs() < 1e-12, "{fit:?}");
    assert!(fit.alpha.abs() < 1e-3);
    assert!((fit.d + gamma).abs() < 1e-3);
}

#[test]
fn table_residuals_shrink_outward() {
    let s = solve_linearized(2.0, -7.0, 200.0).unwrap();
    let t = asymptotic_table_check(&s.psi, &s.fit, &[12.5, 25.0, 50.0]);
    for (name, v) in &t.lines {
        assert!(v[1] < v[0] && v[2] < v[1], "{name}: {v:?}");
    }
}

#[test]
fn psi0_normalization_and_slope() {
    let p = psi0_profile(200.0).unwrap();
    assert!((p.fit.a - 8.0).abs() < 1e-6);
    assert!(p.fit.b.abs() < 1e-10);
    assert!((p.fit.alpha - 48.0).abs() < 0.48);
    let slope = GAMMA6 * p.alpha_integral;
    assert!((slope / (24.0 * LAMBDA1) - 1.0).abs() < 0.05, "{slope}");
}

#[test]
fn psi0_needs_long_domain() {
    assert!(matches!(psi0_profile(60.0), Err(LinearError::InvalidInput(_))));
}

#[test]
fn five_draws_within_budget() {
    let t = Instant::now();
    let draws = [(0.3, 1.7), (-2.0, 15.0), (4.0, -30.0), (0.05, -0.4), (-1.0, -90.0)];
    for (l, b) in draws {
        let s = solve_linearized(l, b, 200.0).unwrap();
        assert!(s.identity_residual() <= 1e-2, "({l}, {b}): {:?}", s.fit);
    }
    assert!(t.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn exports() {
    let s = solve_linearized(1.0, 0.0, 60.0).unwrap();
    let mut j = Vec::new();
    s.write_json(&mut j).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&j).unwrap();
    for k in ["a", "b", "d", "alpha", "alpha_integral", "residuals"] {
        assert!(v.get(k).is_some(), "{k}");
    }
    let mut c = Vec::new();
    s.write_csv(&mut c).unwrap();
    let text = String::from_utf8(c).unwrap();
    assert!(text.starts_with("r,psi,dpsi,lap_psi,dlap_psi,bilap_psi,dbilap_psi\n"));
    assert!(text.lines().count() > 10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solutions_are_linear(l in -5.0f64..5.0, b in -50.0f64..50.0, ci in 0usize..3) {
        let c = [-1.0, 2.0, 10.0][ci];
        let one = integrate_linear(0.0, l, b, 60.0).unwrap();
        let many = integrate_linear(0.0, c * l, c * b, 60.0).unwrap();
        for r in [0.5, 5.0, 30.0, 60.0] {
            let (x, y) = (one.value(r), many.value(r));
            prop_assert!((y - c * x).abs() <= 1e-10 * (c * x).abs().max(1e-300), "r={} {} {}", r, x, y);
        }
    }
}
