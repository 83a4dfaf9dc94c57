//! Randomized checks of the library invariants over continuous parameter ranges.

use proptest::prelude::*;
use rug::Float;

use spreadpoly::orthopoly::{rakhmanov_density, zeros};
use spreadpoly::quadrature::{density_moment, integrate_abs_density_power, integrate_adaptive, integrate_density_power, orthonormality_product, AdaptiveOptions};
use spreadpoly::renyi::bell::{bell_polynomial, bell_polynomial_enumerated, power_coeffs_of, power_functional_bell, renyi_length_bell};
use spreadpoly::renyi::lauricella::power_functional_lauricella;
use spreadpoly::renyi::{length_from_functional, RenyiOrder};
use spreadpoly::shannon::{bound_dominance_check, shannon_inequality_check};
use spreadpoly::spreading::{moment, stddev};
use spreadpoly::{Family, Interval, PrecisionContext};

const PREC: u32 = 256;

fn ctx() -> PrecisionContext {
    PrecisionContext::default()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn parameter() -> impl Strategy<Value = f64> {
    -0.95f64..6.0
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::hermite()),
        parameter().prop_map(|a| Family::laguerre(a).unwrap()),
        (parameter(), parameter()).prop_map(|(a, b)| Family::jacobi(a, b).unwrap()),
    ]
}

/// Nearest integer; exact while below 2^53.
fn to_integer(x: &Float) -> i64 {
    let r = Float::with_val(x.prec(), x.round_ref()).to_f64();
    assert!(r.abs() < 2f64.powi(53), "{r} too large to compare exactly");
    r as i64
}

fn convolve(a: &[Float], b: &[Float]) -> Vec<Float> {
    let mut out = vec![Float::with_val(PREC, 0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Float::with_val(PREC, x * y);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bell_recurrence_matches_partition_enumeration(
        args in prop::collection::vec(-5i32..=5, 12),
        m in 0usize..=12,
        l in 0usize..=12,
    ) {
        // integer arguments give integer B_{m,l}; compare exactly after rounding
        let args: Vec<Float> = args.into_iter().map(|v| Float::with_val(PREC, v)).collect();
        let a = bell_polynomial(m, l, &args);
        let b = bell_polynomial_enumerated(m, l, &args);
        prop_assert_eq!(to_integer(&a), to_integer(&b));
        prop_assert!(Float::with_val(PREC, &a - &b).abs() < 1e-30);
    }

    #[test]
    fn polynomial_power_matches_repeated_convolution(
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..=7),
        power in 1u32..=6,
    ) {
        let c: Vec<Float> = coeffs.iter().map(|&v| Float::with_val(PREC, v)).collect();
        let mut direct = vec![Float::with_val(PREC, 1)];
        for _ in 0..power {
            direct = convolve(&direct, &c);
        }
        let bell = power_coeffs_of(&c, power);
        prop_assert_eq!(bell.len(), direct.len());
        let scale = direct.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max).max(1e-300);
        for (a, b) in bell.iter().zip(&direct) {
            prop_assert!(Float::with_val(PREC, a - b).to_f64().abs() / scale < 1e-60);
        }
    }

    #[test]
    fn orthonormality(fam in family(), n in 0usize..=30, m in 0usize..=30) {
        let v = orthonormality_product(&fam, n, m, PREC).unwrap().to_f64();
        let target = if n == m { 1.0 } else { 0.0 };
        prop_assert!((v - target).abs() <= 1e-12, "{fam} n={n} m={m}: {v}");
    }

    #[test]
    fn stddev_matches_quadrature(fam in family(), n in 0usize..=30) {
        let m1 = density_moment(&fam, n, 1, &ctx()).unwrap();
        let m2 = density_moment(&fam, n, 2, &ctx()).unwrap();
        let s = stddev(&fam, n);
        prop_assert!(rel(s, (m2 - m1 * m1).sqrt()) <= 1e-12, "{fam} n={n}");
    }

    #[test]
    fn zeros_interlace(fam in family(), n in 1usize..=25) {
        let a = zeros(&fam, n).unwrap();
        let b = zeros(&fam, n + 1).unwrap();
        for (i, z) in a.iter().enumerate() {
            prop_assert!(b[i] < *z && *z < b[i + 1], "{fam} n={n} i={i}");
        }
    }

    #[test]
    fn moments_reproduce_stddev(alpha in parameter(), n in 0usize..=20) {
        let fam = Family::laguerre(alpha).unwrap();
        let (m1, m2) = (moment(&fam, n, 1).unwrap(), moment(&fam, n, 2).unwrap());
        prop_assert!(rel((m2 - m1 * m1).sqrt(), stddev(&fam, n)) <= 1e-13);
        let h = Family::hermite();
        let (m1, m2) = (moment(&h, n, 1).unwrap(), moment(&h, n, 2).unwrap());
        prop_assert_eq!(m1, 0.0);
        prop_assert!(rel(m2.sqrt(), stddev(&h, n)) <= 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bell_length_matches_oracle(fam in family(), n in 0usize..=8, two_q in 2u32..=6) {
        let q = RenyiOrder::new(two_q).unwrap();
        prop_assume!(q.check_integrable(&fam).is_ok());
        let w = integrate_density_power(&fam, n, q, &ctx()).unwrap();
        match (renyi_length_bell(&fam, n, q, &ctx()), length_from_functional(w, q)) {
            (Ok(b), Ok(o)) => prop_assert!(rel(b, o) <= 1e-10, "{fam} n={n} 2q={two_q}: {b} vs {o}"),
            // an exactly vanishing signed functional must vanish on both routes
            (Err(_), Err(_)) => {}
            (b, o) => prop_assert!(false, "{fam} n={n} 2q={two_q}: {b:?} vs {o:?}"),
        }
    }

    #[test]
    fn lauricella_length_matches_bell(alpha in 0.0f64..5.0, n in 0usize..=6, k in 0usize..4) {
        let two_q = [3u32, 4, 5, 6][k];
        let q = RenyiOrder::new(two_q).unwrap();
        let fam = Family::laguerre(alpha).unwrap();
        // functionals, not lengths: for odd 2q the signed value may be negative
        let l = power_functional_lauricella(n, alpha, q, &ctx()).unwrap();
        let b = power_functional_bell(&fam, n, q, &ctx()).unwrap();
        prop_assert!(rel(l, b) <= 1e-10, "alpha={alpha} n={n} 2q={two_q}: {l} vs {b}");
    }

    #[test]
    fn renyi_length_scales_with_the_variable(n in 0usize..=6, two_q in 3u32..=6, scale in 0.2f64..5.0) {
        // density of lambda x: rho(x / lambda) / lambda, integrated directly
        let q = RenyiOrder::new(two_q).unwrap();
        let h = Family::hermite();
        let splits: Vec<f64> = if n == 0 { Vec::new() } else { zeros(&h, n).unwrap().iter().map(|z| z * scale).collect() };
        let opts = AdaptiveOptions::default().with_abs_tol(1e-15);
        let w = integrate_adaptive(
            |a| (rakhmanov_density(&h, n, a.x / scale) / scale).powf(q.q()),
            Interval::new(f64::NEG_INFINITY, f64::INFINITY).unwrap(),
            &splits,
            &opts,
        )
        .unwrap()
        .value;
        let scaled = length_from_functional(w, q).unwrap();
        // odd 2q: the Bell functional is the signed p_n^{2q}, not rho^q
        let base = if two_q % 2 == 0 {
            renyi_length_bell(&h, n, q, &ctx()).unwrap()
        } else {
            length_from_functional(integrate_abs_density_power(&h, n, q, &ctx()).unwrap().value, q).unwrap()
        };
        prop_assert!(rel(scaled, scale * base) <= 1e-9, "n={n} 2q={two_q} scale={scale}: {scaled} vs {}", scale * base);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn shannon_audits_hold(fam in family(), n in 0usize..=20) {
        let b = bound_dominance_check(&fam, n, &ctx()).unwrap();
        prop_assert!(b.holds, "{fam} n={n}: {b:?}");
        let s = shannon_inequality_check(&fam, n, &ctx()).unwrap();
        prop_assert!(s.holds, "{fam} n={n}: {s:?}");
    }

    #[test]
    fn jacobi_reflection_leaves_lengths_unchanged(a in parameter(), b in parameter(), n in 0usize..=10) {
        let (f, g) = (Family::jacobi(a, b).unwrap(), Family::jacobi(b, a).unwrap());
        let q = RenyiOrder::integer(2).unwrap();
        prop_assume!(q.check_integrable(&f).is_ok());
        let (lf, lg) = (renyi_length_bell(&f, n, q, &ctx()).unwrap(), renyi_length_bell(&g, n, q, &ctx()).unwrap());
        prop_assert!(rel(lf, lg) <= 1e-12);
        let (sf, sg) = (
            spreadpoly::shannon::shannon_numeric(&f, n, &ctx()).unwrap(),
            spreadpoly::shannon::shannon_numeric(&g, n, &ctx()).unwrap(),
        );
        let tol = sf.est_error.unwrap() + sg.est_error.unwrap();
        prop_assert!((sf.entropy - sg.entropy).abs() <= tol, "({a},{b}) n={n}");
    }
}
