//! Quadrature oracles: exact Gauss rules for polynomial-power integrals and an
//! adaptive integrator for logarithmic integrands.

pub mod adaptive;
pub mod gauss;

use rug::Float;

pub use adaptive::{integrate_adaptive, integrate_log_singular, Abscissa, AdaptiveOptions, Integral};
pub use gauss::{gauss_rule, gauss_rule_at, QuadratureRule, WeightSpec};

use crate::error::Result;
use crate::family::Family;
use crate::orthopoly::{density_at, zeros, Orthonormal, OrthonormalExt};
use crate::precision::{PrecisionContext, SignedSum};
use crate::renyi::{vanishes_by_parity, RenyiOrder};

/// Gauss nodes needed to integrate a polynomial of degree `degree` exactly.
pub fn nodes_for_degree(degree: usize) -> usize {
    degree / 2 + 1
}

/// `W_q = int p_n^{2q} omega^q dx` from a Gauss rule for the weight `omega^q`.
///
/// The rule has `exact_degree >= n * two_q`, so the value is exact up to the
/// working precision. For odd `two_q` this is the signed power; it vanishes
/// identically when the weight is even and `n` is odd.
pub fn integrate_density_power(family: &Family, n: usize, q: RenyiOrder, ctx: &PrecisionContext) -> Result<f64> {
    q.check_integrable(family)?;
    if vanishes_by_parity(family, n, q) {
        return Ok(0.0);
    }
    let w = ctx.escalate(
        "density power integral",
        |prec| density_power_sum(family, n, q, 0, prec),
        SignedSum::disagreement,
    )?;
    Ok(w.resolve().to_f64())
}

/// The Gauss-rule power integral with `extra_nodes` beyond the exact count.
pub fn density_power_at(family: &Family, n: usize, q: RenyiOrder, extra_nodes: usize, prec: u32) -> Result<Float> {
    Ok(density_power_sum(family, n, q, extra_nodes, prec)?.value)
}

fn density_power_sum(family: &Family, n: usize, q: RenyiOrder, extra_nodes: usize, prec: u32) -> Result<SignedSum> {
    q.check_integrable(family)?;
    let degree = n * q.two_q() as usize;
    let rule = gauss_rule_at(WeightSpec::power_of_family(family, q.q()), nodes_for_degree(degree) + extra_nodes, prec)?;
    let poly = OrthonormalExt::new(family, n, prec);
    let mut acc = SignedSum::new(prec);
    for (x, w) in rule.nodes().iter().zip(rule.weights()) {
        let mut p = poly.eval(x);
        rug::ops::PowAssign::pow_assign(&mut p, q.two_q());
        acc.add(p * w);
    }
    Ok(acc)
}

/// `<x^k> = int x^k rho_n dx`, exact through a Gauss rule for `omega`.
pub fn density_moment(family: &Family, n: usize, k: u32, ctx: &PrecisionContext) -> Result<f64> {
    let m = nodes_for_degree(2 * n + k as usize);
    let v = ctx.escalate(
        "density moment",
        |prec| {
            let rule = gauss_rule_at(WeightSpec::of_family(family), m, prec)?;
            let poly = OrthonormalExt::new(family, n, prec);
            Ok(rule.integrate(|x| {
                let p = poly.eval(x);
                let mut xk = x.clone();
                rug::ops::PowAssign::pow_assign(&mut xk, k);
                Float::with_val(prec, p.square_ref()) * xk
            }))
        },
        |a, b| {
            // odd moments of even densities vanish; compare absolutely there
            let d = Float::with_val(b.prec(), a - b).abs().to_f64();
            let scale = b.to_f64().abs();
            if scale < 1e-30 { d } else { d / scale }
        },
    )?;
    Ok(v.to_f64())
}

/// `int p_n p_m omega dx` through an exact Gauss rule.
pub fn orthonormality_product(family: &Family, n: usize, m: usize, prec: u32) -> Result<Float> {
    let rule = gauss_rule_at(WeightSpec::of_family(family), nodes_for_degree(n + m), prec)?;
    let pn = OrthonormalExt::new(family, n, prec);
    let pm = OrthonormalExt::new(family, m, prec);
    Ok(rule.integrate(|x| pn.eval(x) * pm.eval(x)))
}

/// `int |p_n|^{2q} omega^q dx = int rho_n^q dx` by adaptive integration split
/// at the zeros of `p_n`. Agrees with [`integrate_density_power`] for even
/// `two_q`; for odd `two_q` it is the functional of the density itself.
pub fn integrate_abs_density_power(family: &Family, n: usize, q: RenyiOrder, ctx: &PrecisionContext) -> Result<Integral> {
    q.check_integrable(family)?;
    let poly = Orthonormal::new(family, n);
    let splits = if n == 0 { Vec::new() } else { zeros(family, n)? };
    let qf = q.q();
    integrate_log_singular(
        |a| {
            let r = density_at(&poly, a.x, a.from_lower, a.from_upper);
            if r == 0.0 { 0.0 } else { r.powf(qf) }
        },
        family.interval(),
        &splits,
        ctx,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn power_integral_examples() {
        let q2 = RenyiOrder::integer(2).unwrap();
        let h = integrate_density_power(&Family::hermite(), 0, q2, &ctx()).unwrap();
        assert!((h - (2.0 * PI).sqrt().recip()).abs() < 1e-15);
        let l = integrate_density_power(&Family::laguerre(0.0).unwrap(), 0, q2, &ctx()).unwrap();
        assert!((l - 0.5).abs() < 1e-15);
        let j = integrate_density_power(&Family::jacobi(0.0, 0.0).unwrap(), 0, q2, &ctx()).unwrap();
        assert!((j - 0.5).abs() < 1e-15);
        // int (x-1)^4 e^{-2x} dx = 1/4
        let l1 = integrate_density_power(&Family::laguerre(0.0).unwrap(), 1, q2, &ctx()).unwrap();
        assert!((l1 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn divergent_power_is_rejected() {
        let q = RenyiOrder::integer(3).unwrap();
        let r = integrate_density_power(&Family::laguerre(-0.5).unwrap(), 2, q, &ctx());
        assert!(matches!(r, Err(crate::Error::Divergent(_))));
    }

    #[test]
    fn parity_zero_for_odd_powers() {
        let q = RenyiOrder::new(3).unwrap();
        assert_eq!(integrate_density_power(&Family::hermite(), 3, q, &ctx()).unwrap(), 0.0);
        let w = integrate_density_power(&Family::hermite(), 2, q, &ctx()).unwrap();
        assert!(w != 0.0);
    }

    #[test]
    fn absolute_power_matches_signed_for_even_orders() {
        for fam in [Family::hermite(), Family::laguerre(0.5).unwrap(), Family::jacobi(2.0, -0.25).unwrap()] {
            let q = RenyiOrder::integer(2).unwrap();
            let exact = integrate_density_power(&fam, 4, q, &ctx()).unwrap();
            let adaptive = integrate_abs_density_power(&fam, 4, q, &ctx()).unwrap();
            assert!((adaptive.value - exact).abs() <= 1e-11 * exact, "{fam}: {} vs {exact}", adaptive.value);
        }
        // n = 0 has no sign change, so both notions agree for odd orders too
        let q = RenyiOrder::new(3).unwrap();
        let fam = Family::laguerre(2.0).unwrap();
        let exact = integrate_density_power(&fam, 0, q, &ctx()).unwrap();
        let adaptive = integrate_abs_density_power(&fam, 0, q, &ctx()).unwrap();
        assert!((adaptive.value - exact).abs() <= 1e-11 * exact);
    }
}
