mod common;

use common::{bisect, bipartite_oracle, h, rel, tilde_oracle};
use graphcode::thresholds::{
    delta_asymptotic, delta_bound, entropy, entropy_vec, f_bipartite, gamma0_asymptotic, gamma0_hamming,
    gamma0_hypergraph, gamma0_tau, sigma0_bipartite, sigma0_bipartite_asymptotic, tilde_f, tilde_f_closed_form,
    x0_tau, EpsMode,
};
use proptest::prelude::*;

#[test]
fn entropy_examples() {
    assert_eq!(entropy(0.5), 1.0);
    assert_eq!(entropy(0.0), 0.0);
    assert_eq!(entropy(1.0), 0.0);
    assert!((entropy_vec(&[0.25; 4]) - 2.0).abs() < 1e-15);
}

#[test]
fn f_bipartite_against_grid() {
    let lib = f_bipartite(7, 2, 0.1).unwrap();
    let oracle = bipartite_oracle(7, 2, 0.1, 0.02);
    assert!((lib.value - oracle).abs() < 1e-2, "lib {} oracle {}", lib.value, oracle);
    assert!(lib.residual <= 1e-9);
}

#[test]
fn f_bipartite_crosses_at_sigma0() {
    let s0 = sigma0_bipartite(23, 3).unwrap().value;
    let f = f_bipartite(23, 3, s0).unwrap().value;
    assert!(rel(f, 22.0 * h(s0)) < 1e-6);
    assert!(f_bipartite(23, 3, 1e-12).unwrap().value.abs() < 1e-9);
}

#[test]
fn sigma0_radius_one_is_zero() {
    for n in [7, 15, 23, 31, 63] {
        assert_eq!(sigma0_bipartite(n, 1).unwrap().value, 0.0, "n = {n}");
    }
}

#[test]
fn tilde_f_against_grid() {
    for gamma in [0.02, 0.05, 0.1] {
        let lib = tilde_f(7, 1, 3, gamma).unwrap();
        let oracle = tilde_oracle(7, 3, gamma, 0.01);
        assert!((lib.value - oracle).abs() < 1e-2, "gamma {gamma}: lib {} oracle {}", lib.value, oracle);
    }
}

#[test]
fn tilde_f_against_grid_distance_four() {
    for gamma in [0.02, 0.05, 0.1] {
        let lib = tilde_f(8, 1, 4, gamma).unwrap();
        let oracle = tilde_oracle(8, 4, gamma, 0.02);
        assert!((lib.value - oracle).abs() < 1e-2, "gamma {gamma}: lib {} oracle {}", lib.value, oracle);
    }
}

#[test]
fn tilde_f_matches_closed_form() {
    for n in [15, 31, 63] {
        for gamma in [0.001, 0.01, 0.05] {
            let a = tilde_f(n, 1, 3, gamma).unwrap().value;
            let (b, _) = tilde_f_closed_form(n, gamma).unwrap();
            assert!((a - b).abs() < 1e-8, "n {n} gamma {gamma}: {a} vs {b}");
        }
    }
}

#[test]
fn tilde_f_profile_is_feasible() {
    let r = tilde_f(31, 2, 5, 0.02).unwrap();
    let s: f64 = r.z.iter().sum();
    assert!((s - 1.0).abs() < 1e-12);
    let mean: f64 = r.z.iter().enumerate().map(|(i, z)| i as f64 * z).sum();
    assert!(rel(mean, 0.02 * 31.0) < 1e-9);
    let good: f64 = (1..=2).map(|i| i as f64 * r.z[i]).sum();
    let bad: f64 = (3..=31).map(|i| 2.0 * r.z[i]).sum();
    assert!(rel(good, bad) < 1e-9);
}

/// Random points of the radius-1, distance-3 region for `n = 7`.
fn feasible_point(gamma: f64, w: &[f64]) -> Option<Vec<f64>> {
    let n = 7;
    let target = gamma * n as f64;
    let s: f64 = w.iter().sum();
    // Tail z_3..z_7 scaled so that Σ (i+1) z_i leaves room for z_2.
    let frac = w[0] / (s + 1.0);
    let scale: f64 = (0..5).map(|k| (k + 4) as f64 * w[k + 1]).sum::<f64>();
    let mut z = vec![0.0; n + 1];
    for k in 0..5 {
        z[3 + k] = if scale > 0.0 { frac * target * w[k + 1] / scale } else { 0.0 };
    }
    let rest: f64 = (3..=n).map(|i| (i + 1) as f64 * z[i]).sum();
    z[2] = (target - rest) / 3.0;
    z[1] = z[2..].iter().sum();
    z[0] = 1.0 - z[1..].iter().sum::<f64>();
    (z.iter().all(|&p| p >= 0.0)).then_some(z)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn objective_is_concave_on_region(
        w1 in prop::collection::vec(0.0f64..1.0, 6),
        w2 in prop::collection::vec(0.0f64..1.0, 6),
        lambda in 0.01f64..0.99,
        gamma in 0.01f64..0.12,
    ) {
        let (Some(z1), Some(z2)) = (feasible_point(gamma, &w1), feasible_point(gamma, &w2)) else {
            return Ok(());
        };
        let mix: Vec<f64> = z1.iter().zip(&z2).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let lhs = common::g(&mix);
        let rhs = lambda * common::g(&z1) + (1.0 - lambda) * common::g(&z2);
        prop_assert!(lhs >= rhs - 1e-12);
    }
}

#[test]
fn gamma0_grows_with_l_at_n511() {
    let values: Vec<f64> = [17, 23, 28, 34, 40, 45, 51]
        .iter()
        .map(|&l| gamma0_hypergraph(511, 1, 3, l).unwrap().value)
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
}

#[test]
fn hamming_path_agrees_with_general_solver() {
    for (n, l) in [(31, 5), (127, 9)] {
        let a = gamma0_hypergraph(n, 1, 3, l).unwrap().value;
        let b = gamma0_hamming(n, l).unwrap().value;
        assert!(rel(a, b) < 1e-6, "n {n} l {l}: {a} vs {b}");
    }
}

#[test]
fn results_carry_small_residuals() {
    let r = gamma0_hypergraph(127, 1, 3, 9).unwrap();
    assert!(r.residual <= 1e-9);
    let r = delta_bound(127, 3, 9).unwrap();
    assert!(r.residual <= 1e-9);
    let r = sigma0_bipartite(31, 2).unwrap();
    assert!(r.residual <= 1e-9);
}

#[test]
fn delta_bound_reference_rows() {
    let v = delta_bound(511, 3, 17).unwrap().value;
    assert!(rel(v, 0.00415) < 0.02, "{v}");
    let v = delta_bound(1023, 3, 51).unwrap().value;
    assert!(rel(v, 0.003394) < 0.02, "{v}");
}

#[test]
fn delta_asymptotic_against_bisection() {
    let ratio = |x: f64| h(x) / x;
    let oracle = bisect(|x| ratio(x) - 4.0, 1e-6, 0.5);
    let lib = delta_asymptotic(2, 0.5).unwrap().value;
    assert!((lib - oracle).abs() < 1e-10, "{lib} vs {oracle}");

    for (l, d0) in [(3usize, 0.05f64), (10, 0.01)] {
        let target = l as f64 / (l - 1) as f64 * h(d0) / d0;
        let oracle = bisect(|x| ratio(x) - target, 1e-12, 0.5);
        let lib = delta_asymptotic(l, d0).unwrap().value;
        assert!(rel(lib, oracle) < 1e-8);
        assert!(lib < d0);
    }
}

#[test]
fn delta_asymptotic_vanishes_with_delta0() {
    let a = delta_asymptotic(3, 1e-3).unwrap().value;
    let b = delta_asymptotic(3, 1e-6).unwrap().value;
    assert!(b < a && b < 1e-5);
}

#[test]
fn bipartite_asymptotic_is_capped_and_monotone() {
    let vals: Vec<f64> = [1e3, 1e6, 1e9]
        .iter()
        .map(|&n| sigma0_bipartite_asymptotic(Some(n as u64), 0.1, EpsMode::Finite).unwrap().value)
        .collect();
    assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{vals:?}");
    assert!(vals.iter().all(|&v| v <= 0.1));
    assert!(vals[2] > 0.099, "{vals:?}");
    let zero = sigma0_bipartite_asymptotic(None, 0.1, EpsMode::Zero).unwrap().value;
    assert!(zero <= 0.1);
}

/// First interval, on a uniform `10⁵`-point scan, where the large-`n` bipartite
/// inequality holds; returns its upper end or 0.
fn dense_scan(n: f64, tau: f64) -> f64 {
    let eps = (1.0 + n.log2()) / n;
    let holds = |x: f64| (1.0 - x) * h(x * (1.0 - tau) / (1.0 - x)) + x * h(tau) + eps < h(x);
    let pts = 100_000;
    let mut inside = false;
    let mut last = 0.0;
    for k in 1..=pts {
        let x = tau * k as f64 / pts as f64;
        match (inside, holds(x)) {
            (false, true) => inside = true,
            (true, false) => return last,
            _ => {}
        }
        if inside {
            last = x;
        }
    }
    if inside { tau } else { 0.0 }
}

#[test]
fn bipartite_asymptotic_against_dense_scan() {
    for n in [1e3, 1e6] {
        let lib = sigma0_bipartite_asymptotic(Some(n as u64), 0.1, EpsMode::Finite).unwrap().value;
        let scan = dense_scan(n, 0.1);
        assert!((lib - scan).abs() <= 0.1 / 1e5 + 1e-9, "n {n}: lib {lib} scan {scan}");
    }
}

#[test]
fn gamma0_asymptotic_is_tight_at_optimum() {
    let r = gamma0_asymptotic(10, 0.01, None, EpsMode::Zero).unwrap();
    let g0 = r.value;
    let (l, d0, tau) = (10.0f64, 0.01f64, g0);
    let x = g0;
    let lhs = (1.0 - x / d0) * h(x * tau / (d0 - x)) + x / d0 * h(d0 - tau);
    let rhs = (1.0 - 1.0 / l) * h(x);
    assert!((lhs - rhs).abs() < 1e-3, "lhs {lhs} rhs {rhs}");
    assert!(rel(g0, 0.002198) < 0.05);
}

#[test]
fn gamma0_tau_is_min_of_tau_and_x0() {
    for tau in [0.001, 0.003, 0.005] {
        let x0 = x0_tau(10, 0.01, tau, 0.0).unwrap();
        assert_eq!(gamma0_tau(10, 0.01, tau, 0.0).unwrap(), tau.min(x0));
        assert!(x0 <= tau);
    }
}

#[test]
fn invalid_queries_are_rejected() {
    assert!(tilde_f(7, 1, 2, 0.1).is_err());
    assert!(tilde_f(7, 1, 3, 1.5).is_err());
    assert!(gamma0_hypergraph(7, 1, 3, 1).is_err());
    assert!(delta_bound(7, 9, 3).is_err());
    assert!(gamma0_asymptotic(3, 0.6, None, EpsMode::Zero).is_err());
    assert!(x0_tau(3, 0.05, 0.04, 0.0).is_err());
    assert!(sigma0_bipartite_asymptotic(Some(1000), 0.7, EpsMode::Finite).is_err());
}
