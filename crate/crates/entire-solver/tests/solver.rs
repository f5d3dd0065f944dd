use entire_solver::grid::GridSpec;
use entire_solver::solve::SolutionMeta;
use entire_solver::*;
use radial_core::constants::LAMBDA1;
use radial_core::VSpec;
use std::time::Instant;

fn small_grid() -> GridSpec {
    GridSpec {
        r_min: 1e-3,
        ratio: 1.15,
        h: 0.08,
        r_max: 4.0,
        points: 5,
    }
}

fn cfg(total: f64, lambda: f64) -> FixedPointConfig {
    FixedPointConfig {
        grid: small_grid(),
        ..FixedPointConfig::new(total, lambda)
    }
}

#[test]
fn unit_total_curvature_converges() {
    let s = picard_solve(&VSpec::standard(), &cfg(LAMBDA1, 1.0 / 24.0)).unwrap();
    assert!(s.lap_u0() < 0.0);
    assert!(s.is_monotone());
    assert!((s.total_achieved / LAMBDA1 - 1.0).abs() < 1e-6);
    assert!(s.probe_residual(20).unwrap() <= 1e-8);
}

#[test]
fn small_total_is_exact() {
    let total = 0.01 * LAMBDA1;
    let s = picard_solve(&VSpec::standard(), &cfg(total, 1.0 / 24.0)).unwrap();
    assert!((s.total_achieved / total - 1.0).abs() < 1e-6);
    assert!(s.lap_u0() < 0.0);
}

#[test]
fn pohozaev_on_default_grid() {
    let v = VSpec::standard();
    for m in [1.1, 1.5] {
        let t = Instant::now();
        let s = picard_solve(&v, &FixedPointConfig::new(m * LAMBDA1, 1.0 / 24.0)).unwrap();
        assert!(t.elapsed().as_secs_f64() < 60.0);
        let res = pohozaev_residual(&s, &v).unwrap() / LAMBDA1;
        assert!(res.abs() <= 2e-2, "Λ = {m}Λ₁: {res:e}");
        assert!(s.tail_bound < 1e-30);
    }
}

#[test]
fn single_step_continuation_equals_direct_solve() {
    let v = VSpec::standard();
    let c = cfg(1.5 * LAMBDA1, 1.0 / 24.0);
    let direct = picard_solve(&v, &c).unwrap();
    let cont = lambda_continuation(&v, &c, &[1.0 / 24.0]).unwrap();
    assert!(cont.failure.is_none());
    assert_eq!(cont.solutions.len(), 1);
    let s = &cont.solutions[0];
    assert_eq!(s.u0, direct.u0);
    assert_eq!(s.lap_u0(), direct.lap_u0());
}

#[test]
fn continuation_trend() {
    let v = VSpec::standard();
    let c = cfg(1.5 * LAMBDA1, 1.0 / 24.0);
    let cont = lambda_continuation(&v, &c, &[1.0 / 24.0, 1.0 / 48.0, 1.0 / 96.0]).unwrap();
    assert!(cont.failure.is_none());
    let d = cont.diagnostics();
    assert_eq!(d.len(), 3);
    for w in d.windows(2) {
        assert!(w[1].1 > w[0].1, "u(0) not increasing: {d:?}");
        assert!(w[1].3 < w[0].3, "Δu(0) not decreasing: {d:?}");
    }
    for s in &cont.solutions {
        assert!(s.lap_u0() < 0.0 && s.is_monotone());
    }
}

#[test]
fn reintegrated_profile_matches_potential() {
    let s = picard_solve(&VSpec::standard(), &cfg(1.1 * LAMBDA1, 1.0 / 24.0)).unwrap();
    let traj = s.trajectory(1.5).unwrap();
    assert!(traj.status.is_complete());
    for r in [0.1, 0.5, 1.0, 1.5] {
        let a = traj.eval(r).unwrap().u();
        let b = s.u_at(r);
        assert!((a - b).abs() < 1e-6, "r={r}: {a} vs {b}");
    }
}

#[test]
fn json_and_csv_exports() {
    let s = picard_solve(&VSpec::standard(), &cfg(LAMBDA1, 1.0 / 24.0)).unwrap();
    let mut buf = Vec::new();
    s.write_json(&mut buf).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    for key in ["lambda", "c", "c_tilde", "lap_u0", "Lambda_target", "Lambda_achieved", "sweeps", "residual"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let back: SolutionMeta = serde_json::from_value(v).unwrap();
    let m = s.meta();
    assert_eq!((back.sweeps, back.nodes, back.method), (m.sweeps, m.nodes, m.method));
    for (a, b) in [(back.u0, m.u0), (back.c_tilde, m.c_tilde), (back.total_achieved, m.total_achieved)] {
        assert!((a - b).abs() <= 1e-15 * b.abs());
    }
    let mut csv = Vec::new();
    s.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("r,u,du,lap_u,dlap_u,bilap_u,dbilap_u"));
}

#[test]
fn invalid_lambda_rejected() {
    let e = picard_solve(&VSpec::standard(), &cfg(LAMBDA1, 0.5)).unwrap_err();
    assert!(matches!(e, SolverError::InvalidConfig(_)));
}
