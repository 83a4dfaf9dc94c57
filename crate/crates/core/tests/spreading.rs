use spreadpoly::quadrature::{density_moment, AdaptiveOptions};
use spreadpoly::spreading::{
    cramer_rao_product, fisher_information, fisher_length, fisher_information_numeric, laguerre_moment, moment, stddev,
    ExtNonNegReal,
};
use spreadpoly::{Family, PrecisionContext};

const GRID: [f64; 5] = [-0.5, 0.0, 0.5, 2.0, 5.0];

fn families() -> Vec<Family> {
    let mut v = vec![Family::hermite()];
    v.extend(GRID.iter().map(|&a| Family::laguerre(a).unwrap()));
    for &a in &GRID {
        for &b in &GRID {
            v.push(Family::jacobi(a, b).unwrap());
        }
    }
    v
}

#[test]
fn stddev_matches_quadrature() {
    let ctx = PrecisionContext::default();
    for fam in families() {
        for n in [0, 1, 2, 5, 13, 30] {
            let m1 = density_moment(&fam, n, 1, &ctx).unwrap();
            let m2 = density_moment(&fam, n, 2, &ctx).unwrap();
            let oracle = (m2 - m1 * m1).sqrt();
            let closed = stddev(&fam, n);
            assert!((closed - oracle).abs() <= 1e-12 * oracle, "{fam} n={n}: {closed} vs {oracle}");
        }
    }
}

fn finite_fisher_families() -> Vec<Family> {
    vec![
        Family::hermite(),
        Family::laguerre(0.0).unwrap(),
        Family::laguerre(2.0).unwrap(),
        Family::laguerre(5.0).unwrap(),
        Family::jacobi(0.0, 0.0).unwrap(),
        Family::jacobi(0.0, 2.0).unwrap(),
        Family::jacobi(2.0, 0.0).unwrap(),
        Family::jacobi(2.0, 2.0).unwrap(),
        Family::jacobi(2.0, 5.0).unwrap(),
    ]
}

#[test]
fn fisher_matches_numeric_integral() {
    let opts = AdaptiveOptions::default().with_abs_tol(1e-12);
    for fam in finite_fisher_families() {
        for n in 0..=10 {
            let ExtNonNegReal::Finite(closed) = fisher_information(&fam, n) else {
                panic!("{fam} n={n} should be finite");
            };
            let numeric = fisher_information_numeric(&fam, n, 0.0, &opts).unwrap().value;
            assert!((closed - numeric).abs() <= 1e-8 * closed, "{fam} n={n}: {closed} vs {numeric}");
        }
    }
}

#[test]
fn cramer_rao_inequality_where_density_vanishes_at_endpoints() {
    let vanishing = [
        Family::hermite(),
        Family::laguerre(2.0).unwrap(),
        Family::laguerre(5.0).unwrap(),
        Family::jacobi(2.0, 2.0).unwrap(),
        Family::jacobi(2.0, 5.0).unwrap(),
    ];
    for fam in vanishing {
        for n in 0..=30 {
            let (delta, sigma) = (fisher_length(&fam, n), stddev(&fam, n));
            assert!(delta <= sigma, "{fam} n={n}: {delta} > {sigma}");
        }
    }
}

#[test]
fn cramer_rao_can_fail_with_a_nonzero_endpoint_value() {
    // the inequality needs rho to vanish at finite endpoints; these do not
    let uniform = Family::jacobi(0.0, 0.0).unwrap();
    assert!(fisher_length(&uniform, 0).is_infinite());
    let one_sided = Family::jacobi(0.0, 2.0).unwrap();
    assert!(fisher_length(&one_sided, 0) > stddev(&one_sided, 0));
}

#[test]
fn hermite_cramer_rao_is_one_half() {
    for n in 0..=30 {
        assert!((cramer_rao_product(&Family::hermite(), n) - 0.5).abs() <= 1e-14);
    }
}

#[test]
fn moments_match_quadrature() {
    let ctx = PrecisionContext::default();
    let mut fams = vec![Family::hermite()];
    fams.extend(GRID.iter().map(|&a| Family::laguerre(a).unwrap()));
    for fam in fams {
        for n in [0, 1, 4, 11, 20] {
            for k in 0..=8 {
                let closed = moment(&fam, n, k).unwrap();
                let oracle = density_moment(&fam, n, k, &ctx).unwrap();
                let scale = oracle.abs().max(1.0);
                assert!((closed - oracle).abs() <= 1e-12 * scale, "{fam} n={n} k={k}: {closed} vs {oracle}");
            }
        }
    }
}

#[test]
fn moments_reproduce_stddev() {
    for fam in [Family::hermite(), Family::laguerre(0.5).unwrap(), Family::laguerre(5.0).unwrap()] {
        for n in 0..=20 {
            let m1 = moment(&fam, n, 1).unwrap();
            let m2 = moment(&fam, n, 2).unwrap();
            let s = stddev(&fam, n);
            assert!(((m2 - m1 * m1).sqrt() - s).abs() <= 1e-12 * s, "{fam} n={n}");
        }
    }
}

#[test]
fn real_exponent_laguerre_moments() {
    // Gamma(alpha + b + 1) / Gamma(alpha + 1) at n = 0
    for (alpha, b) in [(0.0, 0.5), (2.0, 1.7), (-0.5, 0.3)] {
        let expected = (spreadpoly::special::ln_gamma_f64(alpha + b + 1.0) - spreadpoly::special::ln_gamma_f64(alpha + 1.0)).exp();
        let got = laguerre_moment(0, alpha, b).unwrap();
        assert!((got - expected).abs() <= 1e-13 * expected);
    }
    // high-precision reference values
    for (n, alpha, b, expected) in [(3, 0.5, 0.7, 3.796_036_110_774_009_6), (4, 5.0, 0.2, 1.601_257_171_084_908_8)] {
        let got = laguerre_moment(n, alpha, b).unwrap();
        assert!((got - expected).abs() <= 1e-14 * expected, "{got}");
    }
    assert!(laguerre_moment(2, -0.5, -0.6).is_err());
}
