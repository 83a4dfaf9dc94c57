use std::f64::consts::{E, PI};

use spreadpoly::quadrature::AdaptiveOptions;
use spreadpoly::shannon::{
    bound_dominance_check, jacobi_trivial_bound, optimize_bound, ratio_check, shannon_bound_hermite,
    shannon_bound_laguerre, shannon_inequality_check, shannon_numeric, shannon_numeric_with,
};
use spreadpoly::{Family, PrecisionContext};

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

#[test]
fn ground_state_lengths() {
    let cases = [
        (Family::hermite(), (PI * E).sqrt()),
        (Family::laguerre(0.0).unwrap(), E),
        (Family::jacobi(0.0, 0.0).unwrap(), 2.0),
    ];
    for (fam, expected) in cases {
        let s = shannon_numeric(&fam, 0, &ctx()).unwrap();
        assert!((s.entropy - expected.ln()).abs() <= 1e-9, "{fam}: {}", s.length);
    }
}

#[test]
fn reflection_leaves_jacobi_entropy_unchanged() {
    for (a, b) in [(2.0, 5.0), (-0.5, 0.5), (0.0, 2.0)] {
        for n in [0, 3, 8] {
            let s = shannon_numeric(&Family::jacobi(a, b).unwrap(), n, &ctx()).unwrap();
            let r = shannon_numeric(&Family::jacobi(b, a).unwrap(), n, &ctx()).unwrap();
            assert!((s.entropy - r.entropy).abs() <= 1e-10, "({a},{b}) n={n}");
        }
    }
}

#[test]
fn doubling_the_budget_stays_within_the_error_estimate() {
    let base = AdaptiveOptions::from_context(&ctx()).with_abs_tol(2.5e-10);
    let fine = base.with_max_level(base.max_level + 1).with_abs_tol(2.5e-12);
    for fam in [Family::hermite(), Family::laguerre(0.5).unwrap(), Family::jacobi(-0.5, 2.0).unwrap()] {
        for n in [1, 6, 15] {
            let a = shannon_numeric_with(&fam, n, &base).unwrap();
            let b = shannon_numeric_with(&fam, n, &fine).unwrap();
            let est = a.est_error.unwrap();
            assert!((a.entropy - b.entropy).abs() <= est.max(1e-12), "{fam} n={n}: {} vs {}", a.entropy, b.entropy);
        }
    }
}

#[test]
fn bounds_dominate_the_numeric_length() {
    for fam in [Family::hermite(), Family::laguerre(0.0).unwrap(), Family::laguerre(5.0).unwrap(), Family::jacobi(2.0, 2.0).unwrap()] {
        for n in [0, 1, 2, 7, 20] {
            let audit = bound_dominance_check(&fam, n, &ctx()).unwrap();
            assert!(audit.holds, "{fam} n={n}: {audit:?}");
            let shannon = shannon_inequality_check(&fam, n, &ctx()).unwrap();
            assert!(shannon.holds, "{fam} n={n}: {shannon:?}");
        }
    }
}

#[test]
fn every_grid_bound_dominates() {
    for n in [0, 3, 10] {
        let length = shannon_numeric(&Family::hermite(), n, &ctx()).unwrap().length;
        for k in (2..=12).step_by(2) {
            assert!(shannon_bound_hermite(n, k).unwrap() >= length * (1.0 - 1e-9));
        }
        let length = shannon_numeric(&Family::laguerre(2.0).unwrap(), n, &ctx()).unwrap().length;
        for b in [0.3, 1.0, 1.7, 4.0] {
            assert!(shannon_bound_laguerre(n, 2.0, b).unwrap() >= length * (1.0 - 1e-9));
        }
    }
}

#[test]
fn jacobi_bound_and_saturation() {
    let uniform = shannon_numeric(&Family::jacobi(0.0, 0.0).unwrap(), 0, &ctx()).unwrap();
    assert!((uniform.length - jacobi_trivial_bound()).abs() < 1e-12);
    let s = shannon_numeric(&Family::jacobi(2.0, 2.0).unwrap(), 40, &ctx()).unwrap();
    assert!(s.length < 2.0);
    assert_eq!(optimize_bound(&Family::jacobi(2.0, 2.0).unwrap(), 40).unwrap().value, 2.0);
}

#[test]
fn hermite_ground_state_ratio() {
    let r = ratio_check(&Family::hermite(), 0, &ctx()).unwrap();
    assert!((r - (PI * E).sqrt() / 0.5f64.sqrt()).abs() < 1e-9);
}
