//! Closed-form standard deviation, Fisher information and length, Cramér-Rao
//! products with their large-`n` rates, and ordinary moments.

use std::fmt;

use rug::Float;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::{Family, FamilyKind};
use crate::orthopoly::{zeros, Orthonormal};
use crate::precision::fl;
use crate::quadrature::{integrate_adaptive, AdaptiveOptions, Integral};
use crate::special::{binomial_real, factorial, gamma, terminating_2f1};

/// A nonnegative real or `+inf`. Only the reciprocal is defined on `+inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtNonNegReal {
    Finite(f64),
    Infinite,
}

impl ExtNonNegReal {
    pub fn finite(value: f64) -> Result<Self> {
        if value >= 0.0 && value.is_finite() {
            Ok(Self::Finite(value))
        } else {
            Err(Error::InvalidArgument(format!("{value} is not a finite nonnegative real")))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Finite(v) => Some(*v),
            Self::Infinite => None,
        }
    }

    /// `1/x`, with `1/inf = 0` (and `1/0 = inf`).
    pub fn recip(&self) -> Self {
        match self {
            Self::Finite(v) if *v == 0.0 => Self::Infinite,
            Self::Finite(v) => Self::Finite(v.recip()),
            Self::Infinite => Self::Finite(0.0),
        }
    }

    /// As an f64, mapping `+inf` to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for ExtNonNegReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(v) => write!(f, "{v}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtNonNegReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => s.serialize_f64(*v),
            Self::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Standard deviation of `rho_n`.
pub fn stddev(family: &Family, n: usize) -> f64 {
    let nf = n as f64;
    match family.kind() {
        FamilyKind::Hermite => (nf + 0.5).sqrt(),
        FamilyKind::Laguerre => {
            let a = family.alpha();
            (2.0 * nf * nf + 2.0 * (a + 1.0) * nf + a + 1.0).sqrt()
        }
        FamilyKind::Jacobi => {
            let (a, b) = (family.alpha(), family.beta());
            let s = a + b;
            let t = 2.0 * nf + s;
            // removable 0/0 at small n when s is -1, 0 or 1
            let upper = if n == 0 {
                4.0 * (a + 1.0) * (b + 1.0) / ((s + 2.0).powi(2) * (s + 3.0))
            } else {
                4.0 * (nf + 1.0) * (nf + a + 1.0) * (nf + b + 1.0) * (nf + s + 1.0)
                    / ((t + 1.0) * (t + 2.0).powi(2) * (t + 3.0))
            };
            let lower = match n {
                0 => 0.0,
                1 => 4.0 * (a + 1.0) * (b + 1.0) / ((s + 2.0).powi(2) * (s + 3.0)),
                _ => 4.0 * nf * (nf + a) * (nf + b) * (nf + s) / ((t - 1.0) * t * t * (t + 1.0)),
            };
            (upper + lower).sqrt()
        }
    }
}

/// Fisher information `F = int rho'^2 / rho`, branch by branch. Branch tests
/// compare parameters exactly.
///
/// Jacobi `alpha > 1, beta = 0` is the mirror image of `alpha = 0, beta > 1`
/// under `x -> -x` and gets that finite value.
pub fn fisher_information(family: &Family, n: usize) -> ExtNonNegReal {
    let nf = n as f64;
    match family.kind() {
        FamilyKind::Hermite => ExtNonNegReal::Finite(4.0 * nf + 2.0),
        FamilyKind::Laguerre => {
            let a = family.alpha();
            if a == 0.0 {
                ExtNonNegReal::Finite(4.0 * nf + 1.0)
            } else if a > 1.0 {
                ExtNonNegReal::Finite(((2.0 * nf + 1.0) * a + 1.0) / (a * a - 1.0))
            } else {
                ExtNonNegReal::Infinite
            }
        }
        FamilyKind::Jacobi => {
            let (a, b) = (family.alpha(), family.beta());
            if a == 0.0 && b == 0.0 {
                ExtNonNegReal::Finite(2.0 * nf * (nf + 1.0) * (2.0 * nf + 1.0))
            } else if a == 0.0 && b > 1.0 {
                ExtNonNegReal::Finite(jacobi_fisher_one_sided(nf, b))
            } else if b == 0.0 && a > 1.0 {
                ExtNonNegReal::Finite(jacobi_fisher_one_sided(nf, a))
            } else if a > 1.0 && b > 1.0 {
                let s = a + b;
                let first = nf * (nf + s - 1.0) * ((nf + a) / (b + 1.0) + 2.0 + (nf + b) / (a + 1.0));
                let second = (nf + 1.0) * (nf + s) * ((nf + a) / (b - 1.0) + 2.0 + (nf + b) / (a - 1.0));
                ExtNonNegReal::Finite((2.0 * nf + s + 1.0) / (4.0 * (nf + s - 1.0)) * (first + second))
            } else {
                ExtNonNegReal::Infinite
            }
        }
    }
}

/// `alpha = 0, beta = p > 1` branch.
fn jacobi_fisher_one_sided(nf: f64, p: f64) -> f64 {
    (2.0 * nf + p + 1.0) / 4.0
        * (nf * nf / (p + 1.0) + nf + (4.0 * nf + 1.0) * (nf + p + 1.0) + (nf + 1.0).powi(2) / (p - 1.0))
}

/// Fisher length `F^{-1/2}`, zero when `F = inf`.
pub fn fisher_length(family: &Family, n: usize) -> f64 {
    match fisher_information(family, n) {
        ExtNonNegReal::Finite(f) => f.sqrt().recip(),
        ExtNonNegReal::Infinite => 0.0,
    }
}

/// Cramér-Rao product `delta x * Delta x`.
pub fn cramer_rao_product(family: &Family, n: usize) -> f64 {
    fisher_length(family, n) * stddev(family, n)
}

/// Leading large-`n` behaviour `coefficient * n^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRate {
    pub coefficient: f64,
    pub exponent: f64,
}

impl AsymptoticRate {
    pub fn eval(&self, n: f64) -> f64 {
        self.coefficient * n.powf(self.exponent)
    }
}

/// Rate of the Cramér-Rao product as `n -> inf`, with the same branches as
/// [`fisher_information`].
pub fn asymptotic_cramer_rao(family: &Family) -> AsymptoticRate {
    let rate = |coefficient, exponent| AsymptoticRate { coefficient, exponent };
    let zero = rate(0.0, 0.0);
    match family.kind() {
        FamilyKind::Hermite => rate(0.5, 0.0),
        FamilyKind::Laguerre => {
            let a = family.alpha();
            if a == 0.0 {
                rate(0.5f64.sqrt(), 0.5)
            } else if a > 1.0 {
                rate(((a * a - 1.0) / a).sqrt(), 0.5)
            } else {
                zero
            }
        }
        FamilyKind::Jacobi => {
            let (a, b) = (family.alpha(), family.beta());
            let one_sided = |p: f64| rate((1.0 / (p + 1.0) + 1.0 / (p - 1.0) + 4.0).powf(-0.5), -1.5);
            if a == 0.0 && b == 0.0 {
                rate(2f64.powf(-1.5), -1.5)
            } else if a == 0.0 && b > 1.0 {
                one_sided(b)
            } else if b == 0.0 && a > 1.0 {
                one_sided(a)
            } else if a > 1.0 && b > 1.0 {
                let sum = 1.0 / (b + 1.0) + 1.0 / (b - 1.0) + 1.0 / (a + 1.0) + 1.0 / (a - 1.0);
                rate(sum.powf(-0.5), -1.5)
            } else {
                zero
            }
        }
    }
}

/// Ordinary moment `<x^k>` of `rho_n` (Hermite and Laguerre only).
///
/// Hermite: `k! / (2^k Gamma(k/2+1)) 2F1(-n, -k/2; 1; 2)` for even `k`, `0` for odd.
/// Laguerre: `n! Gamma(k+alpha+1) / Gamma(n+alpha+1) sum_r C(k, n-r)^2 C(k+alpha+r, r)`.
pub fn moment(family: &Family, n: usize, k: u32) -> Result<f64> {
    match family.kind() {
        FamilyKind::Hermite => Ok(hermite_moment(n, k)),
        FamilyKind::Laguerre => laguerre_moment(n, family.alpha(), f64::from(k)),
        FamilyKind::Jacobi => Err(Error::Unsupported(
            "closed-form moments exist for Hermite and Laguerre only; use quadrature::density_moment".into(),
        )),
    }
}

const MOMENT_PREC: u32 = 192;

fn hermite_moment(n: usize, k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    let p = MOMENT_PREC;
    let mut two_k = fl(p, 2);
    rug::ops::PowAssign::pow_assign(&mut two_k, k);
    let prefactor = factorial(p, u64::from(k)) / (two_k * gamma(p, f64::from(k) / 2.0 + 1.0));
    let series = terminating_2f1(n as u32, &fl(p, -f64::from(k) / 2.0), &fl(p, 1), &fl(p, 2))
        .expect("lower parameter 1 has no poles");
    (prefactor * series).to_f64()
}

/// Laguerre moment `<x^b>` for real `b > -(alpha + 1)`; the display with
/// generalized binomials `C(b, j)` holds for non-integer `b` as well.
pub fn laguerre_moment(n: usize, alpha: f64, b: f64) -> Result<f64> {
    if !(b + alpha + 1.0 > 0.0) {
        return Err(Error::Divergent(format!(
            "<x^{b}> diverges for the Laguerre density with alpha = {alpha}"
        )));
    }
    let p = MOMENT_PREC;
    let bf = fl(p, b);
    let mut sum = fl(p, 0);
    for r in 0..=n as u64 {
        let c = binomial_real(&bf, n as u64 - r);
        let upper = Float::with_val(p, &bf + alpha) + r as u32;
        sum += Float::with_val(p, c.square_ref()) * binomial_real(&upper, r);
    }
    let v = factorial(p, n as u64) * gamma(p, b + alpha + 1.0) / gamma(p, n as f64 + alpha + 1.0) * sum;
    Ok(v.to_f64())
}

/// Numeric `int_{lo+eps}^{hi-eps} rho'^2 / rho dx` (cutoff only at finite ends),
/// evaluated as `omega (2 p' + p (ln omega)')^2` so zeros of `p_n` are harmless.
pub fn fisher_information_numeric(family: &Family, n: usize, cutoff: f64, opts: &AdaptiveOptions) -> Result<Integral> {
    if !(cutoff >= 0.0) {
        return Err(Error::InvalidArgument(format!("cutoff {cutoff} must be >= 0")));
    }
    let support = family.interval();
    let lo = if support.lower.is_finite() { support.lower + cutoff } else { support.lower };
    let hi = if support.upper.is_finite() { support.upper - cutoff } else { support.upper };
    let interval = crate::Interval::new(lo, hi)?;
    let poly = Orthonormal::new(family, n);
    let splits = if n == 0 { Vec::new() } else { zeros(family, n)? };
    let (lo_gap, hi_gap) = (
        if support.lower.is_finite() { cutoff } else { 0.0 },
        if support.upper.is_finite() { cutoff } else { 0.0 },
    );
    integrate_adaptive(
        |a| {
            let from_lower = lo_gap + a.from_lower;
            let from_upper = hi_gap + a.from_upper;
            let (p, dp) = poly.eval_with_derivative(a.x);
            let ln_w = family.ln_weight_gaps(a.x, from_lower, from_upper);
            let dln_w = family.ln_weight_derivative_gaps(a.x, from_lower, from_upper);
            let w = ln_w.exp();
            if w == 0.0 {
                return 0.0;
            }
            let g = 2.0 * dp + p * dln_w;
            w * g * g
        },
        interval,
        &splits,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stddev_examples() {
        assert!((stddev(&Family::hermite(), 0) - 0.5f64.sqrt()).abs() < 1e-16);
        assert_eq!(stddev(&Family::laguerre(0.0).unwrap(), 0), 1.0);
        assert!((stddev(&Family::jacobi(0.0, 0.0).unwrap(), 0) - (1.0f64 / 3.0).sqrt()).abs() < 1e-16);
        // Chebyshev first kind: s = -1 makes the printed n = 0, 1 terms 0/0
        let cheb = Family::jacobi(-0.5, -0.5).unwrap();
        assert!((stddev(&cheb, 0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((stddev(&cheb, 1) - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn fisher_examples() {
        assert_eq!(fisher_information(&Family::hermite(), 0), ExtNonNegReal::Finite(2.0));
        assert_eq!(fisher_information(&Family::jacobi(0.0, 0.0).unwrap(), 1), ExtNonNegReal::Finite(12.0));
        assert_eq!(fisher_information(&Family::laguerre(0.5).unwrap(), 4), ExtNonNegReal::Infinite);
        assert_eq!(fisher_information(&Family::laguerre(1.0).unwrap(), 4), ExtNonNegReal::Infinite);
        assert!((fisher_length(&Family::hermite(), 0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(fisher_length(&Family::laguerre(0.0).unwrap(), 0), 1.0);
        assert_eq!(fisher_length(&Family::laguerre(0.5).unwrap(), 3), 0.0);
        // Gamma(3) density: F = <(2/x - 1)^2> = 1
        assert_eq!(fisher_information(&Family::laguerre(2.0).unwrap(), 0), ExtNonNegReal::Finite(1.0));
        let a = fisher_information(&Family::jacobi(3.0, 0.0).unwrap(), 4);
        let b = fisher_information(&Family::jacobi(0.0, 3.0).unwrap(), 4);
        assert_eq!(a, b);
        assert!(a.is_finite());
        assert!(fisher_information(&Family::jacobi(1.0 + 1e-9, 2.0).unwrap(), 2).is_finite());
        assert_eq!(fisher_information(&Family::jacobi(1.0, 2.0).unwrap(), 2), ExtNonNegReal::Infinite);
    }

    #[test]
    fn ext_reals() {
        assert_eq!(ExtNonNegReal::Infinite.recip(), ExtNonNegReal::Finite(0.0));
        assert_eq!(ExtNonNegReal::Finite(4.0).recip(), ExtNonNegReal::Finite(0.25));
        assert!(ExtNonNegReal::finite(-1.0).is_err());
        assert_eq!(serde_json::to_string(&ExtNonNegReal::Infinite).unwrap(), "\"inf\"");
    }

    #[test]
    fn cramer_rao_values() {
        for n in 0..=30 {
            assert!((cramer_rao_product(&Family::hermite(), n) - 0.5).abs() < 1e-15);
        }
        let r = asymptotic_cramer_rao(&Family::laguerre(0.0).unwrap());
        assert!((r.coefficient - 0.5f64.sqrt()).abs() < 1e-16 && r.exponent == 0.5);
        let r = asymptotic_cramer_rao(&Family::jacobi(0.0, 0.0).unwrap());
        assert!((r.eval(7.0) - 14f64.powf(-1.5)).abs() < 1e-16);
        assert_eq!(asymptotic_cramer_rao(&Family::jacobi(0.5, 0.5).unwrap()).coefficient, 0.0);
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moment(&Family::hermite(), 3, 1).unwrap(), 0.0);
        for n in 0..10 {
            assert!((moment(&Family::hermite(), n, 2).unwrap() - (n as f64 + 0.5)).abs() < 1e-13);
        }
        assert!((moment(&Family::laguerre(0.0).unwrap(), 0, 3).unwrap() - 6.0).abs() < 1e-13);
        assert!(matches!(
            moment(&Family::jacobi(0.0, 0.0).unwrap(), 1, 2),
            Err(Error::Unsupported(_))
        ));
        // <x^4> of rho_1 for Hermite: 2/sqrt(pi) Gamma(7/2) = 15/4
        assert!((moment(&Family::hermite(), 1, 4).unwrap() - 3.75).abs() < 1e-14);
    }
}
