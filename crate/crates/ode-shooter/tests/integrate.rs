use ode_shooter::{
    detect_events, integrate_ivp, sign_pattern_check, IvpSpec, IvpStatus, Tolerances,
};
use radial_core::constants::LAMBDA1;
use radial_core::profiles::{synthetic_hybrid, Bubble};
use radial_core::{outward_integrate, spherical_profile, RadialField, RadialGrid, VSpec};
use std::sync::Arc;
use std::time::Instant;

fn hybrid_like_data(u0: f64, beta: f64) -> IvpSpec {
    let b = Bubble::from_u0(u0);
    let j = radial_core::RadialProfile::jet(&b, 0.0);
    IvpSpec::new(
        u0,
        j.lap() + 24.0 * beta,
        j.bilap() - 384.0 * beta,
        VSpec::standard(),
        2.0,
    )
}

#[test]
fn spherical_data_reproduces_eta() {
    let t0 = Instant::now();
    let traj = integrate_ivp(&IvpSpec::spherical(50.0)).unwrap();
    let mut sup: f64 = 0.0;
    for i in 0..=5000 {
        let r = 10.0 * i as f64 / 5000.0;
        let a = traj.eval(r).unwrap();
        let b = spherical_profile(r);
        sup = sup.max((a.u() - b.u()).abs());
    }
    assert!(sup <= 1e-6, "sup error {sup:e}");
    let mass = traj.mass(50.0).unwrap();
    assert!((mass / LAMBDA1 - 1.0).abs() <= 1e-6, "mass {mass}");
    assert!(t0.elapsed().as_secs_f64() < 2.0);
}

#[test]
fn eta_trajectory_has_no_case_iv_pattern() {
    let traj = integrate_ivp(&IvpSpec::spherical(10.0)).unwrap();
    assert!(traj.events.du.is_empty());
    let rep = sign_pattern_check(&traj, &traj.events);
    assert!(!rep.full_pattern());
    assert!(rep.summary().contains("pattern absent"));
}

#[test]
fn negative_curvature_loses_the_pattern() {
    let mut spec = hybrid_like_data(3.0, 3.0);
    spec.v = VSpec::constant(-120.0);
    let traj = integrate_ivp(&spec).unwrap();
    let rep = sign_pattern_check(&traj, &traj.events);
    assert!(rep.missing().is_some(), "{}", rep.summary());
}

#[test]
fn synthetic_beta_eight_shows_full_pattern() {
    let u = synthetic_hybrid(8.0, 8.0);
    let log = detect_events(&u, 1e-7, 1.5, 4000);
    let rep = sign_pattern_check(&u, &log);
    assert!(rep.full_pattern(), "{}", rep.summary());
    assert!(log.is_consistent());
}

#[test]
fn events_stable_under_tolerance_halving() {
    let spec = hybrid_like_data(3.0, 3.0);
    let a = integrate_ivp(&spec).unwrap();
    let b = integrate_ivp(&spec.clone().with_tol(spec.tol.scaled(0.5))).unwrap();
    assert!(!a.events.is_empty());
    assert_eq!(a.events.theta_arrays().theta4.len(), b.events.theta_arrays().theta4.len());
    for q in ode_shooter::Quantity::ALL {
        let (ea, eb) = (a.events.get(q), b.events.get(q));
        assert_eq!(ea.len(), eb.len());
        for (x, y) in ea.iter().zip(eb) {
            assert!((x.r - y.r).abs() <= 1e-8 * x.r.max(1.0), "{q:?}: {} vs {}", x.r, y.r);
        }
    }
}

#[test]
fn outward_reconstruction_matches_trajectory() {
    let spec = hybrid_like_data(2.0, 1.0);
    let traj = integrate_ivp(&spec).unwrap();
    assert_eq!(traj.status, IvpStatus::Completed);
    let grid = Arc::new(RadialGrid::refined(1e-3, 1.05, 0.01, 2.0).unwrap());
    let lap = RadialField::from_fn(grid, |r| traj.eval(r).unwrap().lap());
    let r0 = 0.3;
    let j0 = traj.eval(r0).unwrap();
    for r1 in [0.5, 1.0, 1.9] {
        let got = outward_integrate(j0.u(), j0.du(), &lap, r0, r1).unwrap();
        let want = traj.eval(r1).unwrap().u();
        assert!((got - want).abs() < 1e-7, "r1={r1}: {got} vs {want}");
    }
}

#[test]
fn trajectory_csv_roundtrip() {
    let traj = integrate_ivp(&IvpSpec::spherical(3.0)).unwrap();
    let mut buf = Vec::new();
    traj.write_csv(&mut buf).unwrap();
    let mut rdr = csv::Reader::from_reader(buf.as_slice());
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[0][0], 0.0);
    assert!((rows[0][1] - 2f64.ln()).abs() < 1e-15);
    let last = rows.last().unwrap();
    assert!((last[0] - 3.0).abs() < 1e-12);
}

#[test]
fn rejects_invalid_specs() {
    let mut s = IvpSpec::spherical(1.0);
    s.r_max = -1.0;
    assert!(integrate_ivp(&s).is_err());
    let s = IvpSpec::spherical(1.0).with_tol(Tolerances { rel: 0.0, abs: 1e-12 });
    assert!(integrate_ivp(&s).is_err());
    let mut s = IvpSpec::spherical(1.0);
    s.u0 = 200.0;
    assert!(integrate_ivp(&s).is_err());
}
