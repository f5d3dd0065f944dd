use ode_shooter::{shoot, FreeVar, IvpSpec, OdeError, ShootOptions, Target};
use radial_core::constants::LAMBDA1;
use radial_core::spherical_profile;

#[test]
fn recovers_laplacian_from_far_value() {
    let mut base = IvpSpec::spherical(10.0);
    base.lap_u0 = 0.0;
    let target = Target::Value {
        r: 10.0,
        value: spherical_profile(10.0).u(),
    };
    let out = shoot(
        &base,
        &[target],
        &[FreeVar::LapU0],
        &ShootOptions::with_bracket(-12.01, -11.99),
    )
    .unwrap();
    assert!((out.spec.lap_u0 + 12.0).abs() <= 1e-6, "{}", out.spec.lap_u0);
}

#[test]
fn recovers_bilaplacian_from_total_curvature() {
    let mut base = IvpSpec::spherical(20.0);
    base.bilap_u0 = 0.0;
    let target = Target::Curvature {
        r: 20.0,
        value: LAMBDA1,
    };
    let out = shoot(
        &base,
        &[target],
        &[FreeVar::BilapU0],
        &ShootOptions::with_bracket(191.0, 193.0),
    )
    .unwrap();
    assert!((out.spec.bilap_u0 - 192.0).abs() <= 1e-4, "{}", out.spec.bilap_u0);
}

#[test]
fn two_free_values_by_newton() {
    let base = IvpSpec::spherical(3.0);
    let eta = |r: f64| spherical_profile(r);
    let targets = [
        Target::Value {
            r: 2.0,
            value: eta(2.0).u(),
        },
        Target::Slope {
            r: 3.0,
            value: eta(3.0).du(),
        },
    ];
    let opts = ShootOptions {
        brackets: vec![(-12.5, -11.5), (185.0, 195.0)],
        ..ShootOptions::default()
    };
    let out = shoot(&base, &targets, &[FreeVar::LapU0, FreeVar::BilapU0], &opts).unwrap();
    assert!((out.spec.lap_u0 + 12.0).abs() < 1e-6);
    assert!((out.spec.bilap_u0 - 192.0).abs() < 1e-4);
}

#[test]
fn bracket_without_sign_change_is_reported() {
    let base = IvpSpec::spherical(10.0);
    let target = Target::Value {
        r: 10.0,
        value: spherical_profile(10.0).u(),
    };
    let err = shoot(
        &base,
        &[target],
        &[FreeVar::LapU0],
        &ShootOptions::with_bracket(-11.5, -11.0),
    )
    .unwrap_err();
    assert!(matches!(err, OdeError::BracketFailure { .. }));
}

#[test]
fn consistent_target_with_nothing_free() {
    let base = IvpSpec::spherical(4.0);
    let out = shoot(&base, &[], &[], &ShootOptions::default()).unwrap();
    assert_eq!(out.spec, base);
}
