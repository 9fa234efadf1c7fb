use proptest::prelude::*;
use std::f64::consts::PI;
use struve_core::bessel::rayleigh_sum_j;
use struve_core::inequality::{check, GridSpec, Range, TheoremId};
use struve_core::zeros::{rayleigh_sum_h, zero_table};
use struve_core::*;

fn h(nu: f64, x: f64) -> f64 {
    struve_h(nu, x).unwrap().value
}

fn norm(kind: NormalizedKind, nu: f64, x: f64) -> f64 {
    normalized(NormalizedId::new(kind, nu), x).unwrap().value
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(128))]

    #[test]
    fn gamma_recurrence(a in 0.05f64..40.0) {
        let g = gamma(a).unwrap();
        let g1 = gamma(a + 1.0).unwrap();
        prop_assert!(((g1 - a * g) / g1).abs() <= 1e-12);
    }

    #[test]
    fn gamma_and_log_gamma_agree(a in 0.01f64..150.0) {
        let g = gamma(a).unwrap();
        let l = ln_gamma(a).unwrap().exp();
        prop_assert!(((g - l) / g).abs() <= 1e-12);
    }

    #[test]
    fn beta_is_symmetric(a in 0.01f64..50.0, b in 0.01f64..50.0) {
        prop_assert_eq!(beta(a, b).unwrap(), beta(b, a).unwrap());
    }

    #[test]
    fn half_order_bessel_closed_form(x in 0.01f64..30.0) {
        let j = bessel_j(0.5, x).unwrap().value;
        let exact = (2.0 / (PI * x)).sqrt() * x.sin();
        prop_assert!((j - exact).abs() <= 1e-12 * j.abs().max(1.0));
    }

    #[test]
    fn bessel_wronskian(k in 0usize..3, x in 0.5f64..20.0) {
        let nu = [0.0, 0.5, 1.3][k];
        let w = bessel_j(nu + 1.0, x).unwrap().value * bessel_y(nu, x).unwrap().value
            - bessel_j(nu, x).unwrap().value * bessel_y(nu + 1.0, x).unwrap().value;
        prop_assert!((w - 2.0 / (PI * x)).abs() <= 1e-8, "{w} vs {}", 2.0 / (PI * x));
    }

    #[test]
    fn struve_h_positive_from_half(nu in 0.5f64..6.0, x in 1e-3f64..30.0) {
        prop_assert!(h(nu, x) > 0.0);
    }

    #[test]
    fn struve_h_small_argument(nu in -1.4f64..4.0) {
        let x: f64 = 1e-4;
        let lead = (x.powf(nu + 1.0) / (2f64.powf(nu) * PI.sqrt())) / gamma(nu + 1.5).unwrap();
        prop_assert!((h(nu, x) / lead - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn normalized_k_decreasing(nu in -0.45f64..3.0, x in 0.05f64..30.0) {
        let a = norm(NormalizedKind::CalK, nu, x);
        let b = norm(NormalizedKind::CalK, nu, x + 0.1);
        prop_assert!(b < a);
    }

    #[test]
    fn normalized_k_log_convex_in_x(nu in -0.45f64..3.0, x in 0.3f64..20.0, d in 0.05f64..0.25) {
        let k = |t| norm(NormalizedKind::CalK, nu, t);
        let (a, b, c) = (k(x - d), k(x), k(x + d));
        prop_assert!(b * b <= a * c * (1.0 + 1e-12));
    }
}

#[test]
fn struve_h_large_argument() {
    let x: f64 = 200.0;
    for nu in [1.0f64, 2.5] {
        let lead = (x / 2.0).powf(nu - 1.0) / (PI.sqrt() * gamma(nu + 0.5).unwrap());
        let r = struve_h(nu, x).unwrap();
        assert!((r.value / lead - 1.0).abs() <= 5e-2, "nu={nu}: {}", r.value / lead);
    }
}

#[test]
fn bessel_first_zero_lower_bound() {
    for nu in [-0.4, 0.0, 0.5, 1.0, 2.5] {
        let j = bessel_j_zero(nu, 1).unwrap();
        assert!(j * j > 4.0 * (nu + 1.0));
    }
}

#[test]
fn bessel_rayleigh_sum_from_below() {
    for nu in [-0.4, 0.0, 0.5, 1.0, 2.5] {
        let t = BesselZeroTable::new(nu, 100).unwrap();
        let p: f64 = t.zeros.iter().map(|z| 1.0 / (z * z)).sum();
        let deficit = rayleigh_sum_j(nu).unwrap() - p;
        let tail: f64 = (101..200_000).map(|n| 4.0 / (n as f64 * PI).powi(2)).sum();
        assert!(deficit > 0.0 && deficit <= tail, "nu={nu}: {deficit} vs {tail}");
    }
}

#[test]
fn series_and_integral_agree() {
    for nu in [-0.4, 0.0, 0.5, 1.0, 2.5] {
        for x in [0.5, 1.0, 2.0, 5.0, 10.0, 15.0] {
            let s = struve_h_series(nu, x, 1e-15).unwrap().value;
            let i = struve_h_integral(nu, x, 1e-13).unwrap().value;
            assert!(((s - i) / s).abs() <= 1e-9, "nu={nu} x={x}: {s} vs {i}");
        }
    }
}

#[test]
fn zeros_interlace_with_bessel_zeros() {
    for nu in [-0.4, -0.2, 0.0, 0.2, 0.4] {
        let j = BesselZeroTable::new(nu, 11).unwrap();
        let z = zero_table(nu, 10).unwrap();
        for n in 0..10 {
            assert!(j.zeros[n] < z.zeros[n] && z.zeros[n] < j.zeros[n + 1], "nu={nu} n={n}");
        }
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn product_matches_normalized(k in 0usize..3, x in -10.0f64..10.0) {
        let nu = [-0.4, 0.0, 0.4][k];
        let p = hadamard_product_eval(nu, x, 200).unwrap();
        let n = norm(NormalizedKind::CalH, nu, x.abs());
        prop_assert!((p.partial - n).abs() <= p.tail_bound + 1e-9);
    }

    #[test]
    fn partial_fractions_match_direct(nu in -0.45f64..0.45, x in 0.1f64..15.0) {
        let d = h(nu, x);
        prop_assume!(d.abs() > 1e-3);
        let direct = h(nu - 1.0, x) / d;
        let r = mittag_leffler_ratio(nu, x, 200).unwrap();
        prop_assert!((r.partial - direct).abs() <= r.tail_bound + 1e-7, "{} vs {}", r.partial, direct);
        let l = log_derivative_h(nu, x, 200).unwrap();
        prop_assert!((l.partial - (nu + x * r.partial - (2.0 * nu + 1.0) + 1.0)).abs() <= 1e-9);
    }

    #[test]
    fn bessel_series_matches(nu in -0.9f64..3.0, x in 0.1f64..20.0) {
        let j = j_series_h(nu, x, 200).unwrap();
        let d = h(nu, x);
        prop_assert!((j.partial - d).abs() <= 1e-8 * d.abs().max(1.0), "{} vs {}", j.partial, d);
    }

    #[test]
    fn sandwich_brackets(nu in -0.49f64..0.49) {
        let j1 = bessel_j_zero(nu, 1).unwrap();
        for i in 1..=50 {
            let x = j1 * i as f64 / 51.0;
            let (lo, hi) = bessel_sandwich_h(nu, x).unwrap();
            let v = h(nu, x);
            prop_assert!(lo < v && v < hi, "x={}: {} {} {}", x, lo, v, hi);
        }
    }

    #[test]
    fn normalized_h_log_convex_in_order(nu in 1.55f64..6.0, x in 0.01f64..PI, k in 0usize..3) {
        let d = [0.25, 0.5, 1.0][k];
        let f = |n| norm(NormalizedKind::BbH, n, x);
        let (a, b, c) = (f(nu - d), f(nu), f(nu + d));
        prop_assert!(b * b <= a * c * (1.0 + 1e-12), "{} > {}", b * b, a * c);
    }

    #[test]
    fn super_additivity(k in 0usize..3, x in 0.05f64..10.0, y in 0.05f64..10.0) {
        let nu = [-0.4, -0.25, -0.1][k];
        let c = gamma(0.5 - nu).unwrap() / gamma(-nu).unwrap();
        let f = |t| c * norm(NormalizedKind::CalK, nu, t);
        prop_assert!(f(x + y) - f(x) * f(y) >= -1e-9);
    }

    #[test]
    fn laguerre_margins(nu in -0.5f64..=0.5, m in 1u32..=3, x in -20.0f64..20.0) {
        prop_assert!(laguerre_margin(nu, m, x).unwrap().value >= -1e-10);
    }

    #[test]
    fn modified_turan_nonnegative(nu in -1.5f64..=-0.5, x in 0.01f64..20.0) {
        prop_assert!(turan_delta_l(nu, x).unwrap().value >= -1e-12);
    }
}

proptest! {
    #![proptest_config(cases(12))]

    #[test]
    fn zero_tables_are_certified(nu in -0.49f64..0.49) {
        let t = StruveZeroTable::new(nu, 30).unwrap();
        prop_assert!(t.zeros.windows(2).all(|w| w[0] < w[1]));
        for &z in &t.zeros {
            prop_assert!(h(nu, z - 1e-9) * h(nu, z + 1e-9) < 0.0, "no sign change at {}", z);
        }
        let again = StruveZeroTable::new(nu, 30).unwrap();
        let bits = |t: &StruveZeroTable| t.zeros.iter().map(|z| z.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&t), bits(&again));
    }

    #[test]
    fn rayleigh_sum_within_tail(nu in -0.49f64..0.49) {
        let s = zero_reciprocal_square_sum(nu, 300).unwrap();
        let d = rayleigh_sum_h(nu) - s.partial;
        prop_assert!(d >= -1e-15 && d <= s.tail_bound + 1e-15);
    }
}

#[test]
fn log_derivative_increasing_for_k() {
    let grid = GridSpec::new(Range::new(0.6, 3.0, 0.2).unwrap(), Range::new(0.2, 10.0, 0.1).unwrap());
    let r = check(TheoremId::T2dMono, &grid, 1e-9).unwrap();
    assert!(r.holds(), "min margin {:?} at {:?}", r.min_margin, r.argmin);
}
