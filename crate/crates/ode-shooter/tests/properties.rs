use ode_shooter::{integrate_ivp, IvpSpec};
use proptest::prelude::*;
use radial_core::profiles::Bubble;
use radial_core::{RadialProfile, VSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bilaplacian_decreases_for_positive_curvature(
        u0 in -1.0f64..3.0,
        lap in -40.0f64..10.0,
        bilap in -50.0f64..400.0,
        c0 in 1.0f64..200.0,
    ) {
        let spec = IvpSpec::new(u0, lap, bilap, VSpec::constant(c0), 3.0);
        let traj = integrate_ivp(&spec).unwrap();
        let s = traj.states();
        for w in s.windows(2) {
            prop_assert!(w[1].bilap() < w[0].bilap());
        }
    }

    #[test]
    fn events_scale_with_rescaling(lambda in 0.5f64..2.0, beta in 2.0f64..5.0) {
        let u0 = 3.0;
        let j = Bubble::from_u0(u0).jet(0.0);
        let base = IvpSpec::new(u0, j.lap() + 24.0 * beta, j.bilap() - 384.0 * beta, VSpec::standard(), 2.0);
        let a = integrate_ivp(&base).unwrap();
        let mut scaled = base.clone();
        scaled.u0 += lambda.ln();
        scaled.lap_u0 *= lambda * lambda;
        scaled.bilap_u0 *= lambda.powi(4);
        scaled.r_max = base.r_max / lambda;
        let b = integrate_ivp(&scaled).unwrap();
        for q in ode_shooter::Quantity::ALL {
            let (ea, eb) = (a.events.get(q), b.events.get(q));
            prop_assert_eq!(ea.len(), eb.len());
            for (x, y) in ea.iter().zip(eb) {
                prop_assert!((x.r / lambda - y.r).abs() <= 1e-8 * (1.0 + y.r));
            }
        }
    }
}
