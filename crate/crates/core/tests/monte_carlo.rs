use std::f64::consts::PI;

use sphereperc_core::analytics::{bounds_nl_nu, p_cov};
use sphereperc_core::constellation::{full_coverage_layout, sample_constellation};
use sphereperc_core::percolation::{
    coupled_thresholds, estimate_theta, first_percolating_prefix, percolates, sweep, SweepSpec,
};
use sphereperc_core::{Constellation, SpherePoint};

#[test]
fn single_cap_rule_beyond_hemisphere() {
    // One cap of half-angle gamma > pi/2 covers both poles with probability -cos gamma.
    for gamma in [1.8, 2.2, 2.8] {
        let est = estimate_theta(1, gamma, 20_000, 3, false).unwrap();
        let p = -f64::cos(gamma);
        let sigma = (p * (1.0 - p) / 20_000.0).sqrt();
        assert!(
            (est.theta_hat - p).abs() < 4.0 * sigma,
            "gamma {gamma}: {} vs {p}",
            est.theta_hat
        );
    }
}

#[test]
fn estimates_agree_across_seeds() {
    let gamma = 5.2_f64.to_radians();
    let a = estimate_theta(600, gamma, 1000, 1, false).unwrap();
    let b = estimate_theta(600, gamma, 1000, 2, false).unwrap();
    let tol = 3.0 * (a.std_error().powi(2) + b.std_error().powi(2)).sqrt();
    assert!(
        (a.theta_hat - b.theta_hat).abs() <= tol,
        "{} vs {}",
        a.theta_hat,
        b.theta_hat
    );
}

#[test]
fn estimates_are_reproducible() {
    let gamma = 5.2_f64.to_radians();
    let a = estimate_theta(500, gamma, 300, 8, true).unwrap();
    let b = estimate_theta(500, gamma, 300, 8, true).unwrap();
    assert_eq!(a, b);
}

#[test]
fn coupled_prefixes_are_monotone_pathwise() {
    let gamma = 5.2_f64.to_radians();
    let firsts = coupled_thresholds(1200, gamma, 200, 4).unwrap();
    for (t, first) in firsts.iter().enumerate() {
        // Spot-check the prefix boundary directly.
        let mut s = sphereperc_core::RandomStream::substream(4, t as u64);
        let c = Constellation::from_stream(1200, gamma, &mut s, 4);
        let cuts = [50, 200, 400, 600, 800, 1000, 1200];
        let mut was = false;
        for &k in &cuts {
            let now = percolates(&c.prefix(k));
            assert!(!was || now, "trial {t}: percolation lost between prefixes");
            assert_eq!(now, first.is_some_and(|f| f <= k), "trial {t} prefix {k}");
            was = now;
        }
    }
}

#[test]
fn coupled_sweep_curve_is_monotone() {
    let gamma = 5.2_f64.to_radians();
    let grid: Vec<f64> = (2..=24).map(|k| 25.0 * k as f64).collect();
    let rows = sweep(SweepSpec::Count { gamma }, &grid, 200, 1, true).unwrap();
    assert!(rows.windows(2).all(|w| w[1].theta_hat >= w[0].theta_hat));
    for r in &rows {
        assert!((r.p_cov_analytic - p_cov(r.value as u64, gamma)).abs() < 1e-15);
    }
}

#[test]
fn meridian_chain_of_tangent_caps_does_not_percolate() {
    let gamma = 5.2_f64.to_radians();
    let n_l = bounds_nl_nu(gamma).unwrap().n_l as usize;
    // Tangent caps from the South Pole upwards; the chain stops short of the
    // North Pole.
    let chain: Vec<SpherePoint> = (0..n_l)
        .map(|k| SpherePoint::from_south_angle((2 * k) as f64 * gamma, 0.0))
        .collect();
    let c = Constellation::from_centers(gamma, chain).unwrap();
    assert_eq!(first_percolating_prefix(&c), None);
    assert!(!percolates(&c));

    // Caps just wide enough for the last one to reach the North Pole.
    let gap = PI - 2.0 * (n_l - 1) as f64 * gamma;
    let wide = Constellation::from_centers(gap * 1.0001, c.centers).unwrap();
    assert!(percolates(&wide));
}

#[test]
fn layout_percolates_and_random_subcritical_does_not() {
    let gamma = 5.2_f64.to_radians();
    let (layout, _) = full_coverage_layout(gamma).unwrap();
    assert!(percolates(&layout));
    for seed in 0..50 {
        assert!(!percolates(&sample_constellation(17, gamma, seed).unwrap()));
    }
}
