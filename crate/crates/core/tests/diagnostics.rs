mod common;

use approx::assert_relative_eq;
use common::rng;
use logconvex::convexity::{delta, delta_dlambda, linspace};
use logconvex::diagnostics::{
    d1, d2, delta1_family, delta3, delta3_prime, delta_split, delta_small, e2, e2_prime, positive_alpha_split, positive_alpha_bracket,
    boundary_ratios, find_negative_delta_near_one, limit_first_x1, limit_t2_x1, locate_x_star, verify_claims, CLAIM_IDS,
};
use logconvex::kernels::lambda0;
use logconvex::{ClaimStatus, Error};
use proptest::prelude::*;
use rand::Rng;

fn report<'a>(reports: &'a [logconvex::DiagnosticReport64], id: &str) -> &'a logconvex::DiagnosticReport64 {
    reports.iter().find(|r| r.claim_id == id).unwrap()
}

#[test]
fn e2_documented_values() {
    for (l, a) in [(1.0, -1.0), (3.5, -0.2), (0.4, -1.9)] {
        assert_eq!(e2(l, a, 0.0), -(l + 1.0) * (l + 1.0));
        assert_relative_eq!(e2(l, a, 1.0), -a * (2.0 + a), max_relative = 1e-12, epsilon = 1e-12);
        assert_relative_eq!(e2_prime(l, a, 1.0), -2.0 * a * (l + 2.0 + a), max_relative = 1e-12);
    }
    assert_relative_eq!(e2(1.0, -1.0, 0.5), -1.25, max_relative = 1e-15);
}

#[test]
fn d1_and_d2_at_origin() {
    assert!(d1(1.0f64, -1.0, 1e-8).unwrap().abs() < 1e-14);
    assert!(d2(1.0f64, -1.0, 1e-8).unwrap().abs() < 1e-14);
    assert_relative_eq!(d1(1.0, 0.0, 0.5).unwrap(), 0.0625, max_relative = 1e-13);
}

#[test]
fn d2_single_sign_change() {
    let xs = locate_x_star(1.0f64, -0.5).unwrap();
    assert!(xs > 0.0 && xs < 1.0);
    let mut changes = 0;
    let grid = linspace(0.001, 0.999, 500);
    let mut prev = d2(1.0, -0.5, grid[0]).unwrap() > 0.0;
    for &x in &grid[1..] {
        let now = d2(1.0, -0.5, x).unwrap() > 0.0;
        if now != prev {
            changes += 1;
            assert!((x - xs).abs() < 0.003);
        }
        prev = now;
    }
    assert_eq!(changes, 1);
    for x in linspace(0.01, 0.99, 50) {
        assert!(d2(1.0, -3.0, x).unwrap() < 0.0);
    }
}

#[test]
fn delta_small_examples() {
    let v: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&x| delta_small(1.0, -1.0, x).unwrap() / x).collect();
    assert!(v[0] > v[1] && v[1] > v[2]);
    assert!(delta_small(2.0, -2.0, 0.1).unwrap() > 0.0);
    // d₂ > 0 beyond x*, where the denominator changes sign
    let xs = locate_x_star(1.0, -0.5).unwrap();
    assert!(matches!(delta_small(1.0, -0.5, (xs + 1.0) / 2.0), Err(Error::Regime(_))));
}

#[test]
fn delta1_derivatives_match_differences() {
    let s = 1e-6;
    for (l, a, x) in [(1.0f64, -1.0f64, 0.4f64), (3.0, -0.5, 0.8), (0.7, -2.6, 0.3), (2.0, -1.9, 0.95)] {
        let d = delta1_family(l, a, x).unwrap();
        let p = delta1_family(l, a, x + s).unwrap();
        let m = delta1_family(l, a, x - s).unwrap();
        let tol = |v: f64| 1e-6 * v.abs().max(1e-3);
        assert!(((p.value - m.value) / (2.0 * s) - d.d1).abs() < tol(d.d1), "({l}, {a}, {x})");
        assert!(((p.d1 - m.d1) / (2.0 * s) - d.d2).abs() < tol(d.d2), "({l}, {a}, {x})");
        assert!(((p.d2 - m.d2) / (2.0 * s) - d.d3).abs() < tol(d.d3), "({l}, {a}, {x})");
    }
}

#[test]
fn delta3_values() {
    assert_relative_eq!(delta3(-2.5, 0.5), 1.0 - 0.25 * 2f64.powf(1.5), max_relative = 1e-14);
    assert!((delta3(-2.5f64, 0.5) - 0.29289).abs() < 1e-5);
    let s = 1e-6;
    for x in [0.2, 0.7] {
        let fd = (delta3(-2.7, x + s) - delta3(-2.7, x - s)) / (2.0 * s);
        assert_relative_eq!(fd, delta3_prime(-2.7, x), max_relative = 1e-7);
    }
}

#[test]
fn split_identity_and_limits() {
    for (l, a) in [(1.0f64, -4.0f64), (2.5, -3.5), (0.5, -5.0)] {
        for x in linspace(0.02, 0.98, 25) {
            let s = delta_split(l, a, x).unwrap();
            let d = delta(l, a, x).unwrap();
            assert!((d - (s.first + x * s.second)).abs() <= 1e-9 * d.abs().max(1.0));
            assert!((s.second - s.prefactor * (s.t1 + s.t2)).abs() <= 1e-9 * s.second.abs().max(1.0));
        }
        let near = delta_split(l, a, 1.0 - 1e-6).unwrap();
        assert!((near.first - limit_first_x1(l, a)).abs() < 1e-3 * limit_first_x1(l, a).abs().max(1.0));
        assert!(near.t1.abs() < 1e-3);
    }
    let near = delta_split(1.0f64, -4.0, 1.0 - 1e-6).unwrap();
    assert!((near.t2 - limit_t2_x1(1.0, -4.0)).abs() < 1e-3);
    assert!(delta_split(1.0, -3.0, 0.5).is_err());
}

#[test]
fn positive_alpha_split_identity_and_limits() {
    for (l, a) in [(1.0f64, 1.0f64), (2.0, 0.5), (1.0, 3.0)] {
        for x in linspace(0.02, 0.98, 25) {
            let (t5, t6) = positive_alpha_split(l, a, x).unwrap();
            let d = delta(l, a, x).unwrap();
            let scaled = d * (1.0 - x).powf(1.0 - a);
            assert!((t5 + t6 - scaled).abs() <= 1e-9 * scaled.abs().max(1.0), "({l}, {a}, {x})");
        }
    }
    let (t5, _) = positive_alpha_split(1.0f64, 1.0, 0.999).unwrap();
    assert!(t5.abs() < 1e-2);
    let b = positive_alpha_bracket(1.0f64, 1.0, 1.0 - 1e-9).unwrap();
    assert!((b + 1.0 / 3.0).abs() < 1e-6, "{b}");
    assert!(positive_alpha_split(1.0, -0.5, 0.5).is_err());
}

#[test]
fn boundary_ratio_limits() {
    for a in [-3.5f64, -4.0, -6.0] {
        for l in [0.5f64, 1.0, 4.0] {
            let (rh, rf) = boundary_ratios(l, a, 1.0 - 1e-6).unwrap();
            assert!((rh + (a + 1.0)).abs() < 1e-3 * (a + 1.0).abs());
            assert!((rf + (a + 1.0)).abs() < 1e-3 * (a + 1.0).abs());
        }
    }
}

#[test]
fn verify_documented_regimes() {
    let grid = linspace(0.01, 0.99, 100);
    let r = verify_claims(1.0, -1.0, &grid, 1e-10).unwrap();
    assert!(r.iter().all(|c| c.status != ClaimStatus::Fail), "{r:?}");
    assert!(r.iter().filter(|c| c.passed()).count() >= 8);

    let r = verify_claims(1.0, -2.5, &grid, 1e-10).unwrap();
    assert!(report(&r, "prop5.delta3_positive").passed());
    assert!(report(&r, "prop5.delta_lambda0_positive").passed());
    assert!(r.iter().all(|c| c.status != ClaimStatus::Fail));

    let r = verify_claims(1.0, -4.0, &grid, 1e-10).unwrap();
    assert!(report(&r, "prop6.boundary_ratio_limit").passed());
    assert!(report(&r, "prop6.delta_limit").passed());
    let neg = report(&r, "prop6.negative_near_one");
    assert!(neg.passed() && neg.witness_x.unwrap() > 0.99);

    let r = verify_claims(0.0, -1.0, &grid, 1e-10).unwrap();
    let dz = report(&r, "delta_zero");
    assert!(dz.passed() && dz.worst_violation == 0.0);

    let r = verify_claims(1.0, 1.0, &grid, 1e-10).unwrap();
    assert!(report(&r, "prop6.negative_near_one").passed());
    assert!(report(&r, "prop4.delta_nonneg").skipped());

    let ids: Vec<&str> = r.iter().map(|c| c.claim_id).collect();
    assert_eq!(ids, CLAIM_IDS.to_vec());
}

#[test]
fn verify_boundary_alphas() {
    let grid = linspace(0.01, 0.99, 50);
    for a in [0.0, -2.0, -3.0] {
        let r = verify_claims(2.0, a, &grid, 1e-10).unwrap();
        assert!(r.iter().all(|c| c.status != ClaimStatus::Fail), "alpha {a}: {r:?}");
    }
    let r = verify_claims(2.0, 0.0, &grid, 1e-10).unwrap();
    assert!(report(&r, "prop4.delta_nonneg").passed());
    let r = verify_claims(2.0, -2.0, &grid, 1e-10).unwrap();
    assert!(report(&r, "prop4.ddelta_dlambda_positive").passed());
    let r = verify_claims(2.0, -3.0, &grid, 1e-10).unwrap();
    assert!(report(&r, "prop5.delta3_positive").passed());
}

#[test]
fn proof_battery_upper_regime() {
    let mut g = rng(0xd1a9);
    let grid = linspace(0.01, 0.99, 100);
    for _ in 0..100 {
        let l = 10.0 * (1.0 - g.gen::<f64>()); // (0, 10]
        let a = g.gen_range(-2.0..0.0);
        let mut prev: Option<Vec<f64>> = None;
        for lam in [0.5 * l, l] {
            let row: Vec<f64> = grid.iter().map(|&x| delta(lam, a, x).unwrap()).collect();
            if let Some(p) = &prev {
                for (d, q) in row.iter().zip(p) {
                    assert!(*d >= *q - 1e-12 * d.abs().max(1.0));
                }
            }
            prev = Some(row);
        }
        for &x in &grid {
            assert!(d1(l, a, x).unwrap() >= -1e-10);
            assert!(delta1_family(l, a, x).unwrap().d3 > 0.0);
            assert!(delta_dlambda(l, a, x).unwrap() > 1e-12, "lambda {l}, alpha {a}, x {x}");
        }
    }
}

#[test]
fn proof_battery_middle_regime() {
    let mut g = rng(0xd1a5);
    let grid = linspace(0.01, 0.99, 100);
    for _ in 0..50 {
        let a = g.gen_range(-3.0..-2.0);
        let l = lambda0(a) + g.gen_range(0.01..8.0);
        for &x in &grid {
            assert!(delta3(a, x) > 0.0);
            assert!(d2(l, a, x).unwrap() < 0.0, "lambda {l}, alpha {a}, x {x}");
        }
    }
}

#[test]
fn delta_dlambda_dense_grid() {
    let xs = linspace(0.01, 0.99, 50);
    for a in [-2.0, -1.0, -0.3, -2.8, -2.2] {
        let lo = if a < -2.0 { lambda0(a) } else { 0.0 };
        for i in 1..=50 {
            let l = lo + 0.2 * i as f64;
            for &x in &xs {
                assert!(delta_dlambda(l, a, x).unwrap() > 1e-12, "lambda {l}, alpha {a}, x {x}");
            }
        }
    }
}

#[test]
fn negative_witness_search() {
    for a in [0.5, 1.0, 2.0] {
        assert!(find_negative_delta_near_one(1.0, a).unwrap().is_some());
    }
    assert!(find_negative_delta_near_one(1.0, -1.0).unwrap().is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn d1_nonnegative(l in 0.01..10.0f64, a in -5.0..3.0f64, x in 0.001..0.999f64) {
        prop_assert!(d1(l, a, x).unwrap() >= -1e-10);
    }

    #[test]
    fn e2_increasing_in_upper_regime(l in 0.01..10.0f64, a in -2.0..-1e-3f64, x in 0.0..1.0f64) {
        prop_assert!(e2_prime(l, a, x) > 0.0);
    }

    #[test]
    fn verify_never_fails_in_proved_regimes(l in 0.05..8.0f64, a in -3.0..0.0f64) {
        let grid = linspace(0.02, 0.98, 30);
        let r = verify_claims(l, a, &grid, 1e-10).unwrap();
        for c in &r {
            prop_assert!(c.status != ClaimStatus::Fail, "{:?}", c);
        }
    }
}
