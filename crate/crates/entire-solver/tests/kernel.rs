use entire_solver::{build_log_kernel, log_kernel};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};
use rand_distr::StandardNormal;

/// Mean of `−log|r e₁ − s ω|` over uniform ω ∈ S⁵, with its standard error.
fn monte_carlo(r: f64, s: f64, n: usize, seed: u64) -> (f64, f64) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..n {
        let g: [f64; 6] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut d2 = 0.0;
        for (i, gi) in g.iter().enumerate() {
            let y = s * gi / norm;
            let x = if i == 0 { r } else { 0.0 };
            d2 += (x - y) * (x - y);
        }
        let f = -0.5 * d2.ln();
        sum += f;
        sq += f * f;
    }
    let mean = sum / n as f64;
    let var = sq / n as f64 - mean * mean;
    (mean, (var / n as f64).sqrt())
}

#[test]
fn origin_value() {
    assert_eq!(log_kernel(2.0, 0.0), -(2f64.ln()));
}

#[test]
fn symmetric_pair() {
    assert!((log_kernel(1.0, 3.0) - log_kernel(3.0, 1.0)).abs() < 1e-15);
}

#[test]
fn k21_against_sphere_sampling() {
    let k = log_kernel(2.0, 1.0);
    let exact = -(2f64.ln()) - 0.25 / 3.0 + 0.0625 / 24.0;
    assert!((k - exact).abs() < 1e-13);
    let (mean, se) = monte_carlo(2.0, 1.0, 400_000, 7);
    assert!((mean - k).abs() < 5.0 * se, "mc {mean} ± {se} vs {k}");
}

#[test]
fn coincident_radii_sampling() {
    let k = log_kernel(1.0, 1.0);
    let (mean, se) = monte_carlo(1.0, 1.0, 400_000, 11);
    assert!((mean - k).abs() < 5.0 * se, "mc {mean} ± {se} vs {k}");
}

#[test]
fn separated_scales_approach_log_max() {
    for r in [1e2, 1e4, 1e6] {
        let k = log_kernel(r, 1.0);
        assert!((k + r.ln()).abs() < 1.0 / (r * r), "r={r}");
    }
}

#[test]
fn rectangular_table_matches_pointwise() {
    let r = [0.2, 1.0, 2.5];
    let s = [0.0, 0.5, 1.0, 4.0];
    let t = build_log_kernel(&r, &s, 12).unwrap();
    for (i, ri) in r.iter().enumerate() {
        for (j, sj) in s.iter().enumerate() {
            assert_eq!(t.get(i, j), log_kernel(*ri, *sj));
        }
    }
    let mut buf = Vec::new();
    t.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("r\\s,"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetric_and_scale_covariant(r in 1e-3f64..10.0, s in 1e-3f64..10.0, lam in 0.1f64..10.0) {
        let k = log_kernel(r, s);
        prop_assert!((k - log_kernel(s, r)).abs() < 1e-12);
        prop_assert!((log_kernel(lam * r, lam * s) - (k - lam.ln())).abs() < 1e-12);
    }
}
