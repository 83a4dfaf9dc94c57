//! Shannon entropy and length of `rho_n`: adaptive numerics, large-`n`
//! asymptotics, the linear relation with the standard deviation and
//! moment-based upper bounds.
//!
//! The entropy is split as `S = -<ln p_n^2> - <ln omega>`. Only the first
//! term needs singular quadrature (logarithmic at each zero of `p_n`); the
//! second is closed form for Hermite (`-(n + 1/2)`) and partly closed form for
//! Laguerre (`alpha <ln x> - (2n + alpha + 1)`).

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, FamilyKind};
use crate::orthopoly::{density_at, zeros, Orthonormal};
use crate::precision::PrecisionContext;
use crate::quadrature::{integrate_adaptive, AdaptiveOptions, Integral};
use crate::special::{digamma, ln_gamma_f64};
use crate::spreading::{laguerre_moment, moment, stddev};

/// Absolute error target for numeric entropies, in nats.
pub const ENTROPY_ABS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShannonMethod {
    Numeric,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShannonResult {
    /// Nats.
    pub entropy: f64,
    /// `exp(entropy)`.
    pub length: f64,
    pub method: ShannonMethod,
    /// Absolute entropy error; `None` for asymptotic values, whose `o(1)`
    /// remainder has no estimate.
    pub est_error: Option<f64>,
}

impl ShannonResult {
    fn numeric(entropy: f64, error: f64) -> Self {
        // never report a zero estimate: at least a few ulps of the result
        let floor = 8.0 * f64::EPSILON * entropy.abs().max(1.0);
        Self {
            entropy,
            length: entropy.exp(),
            method: ShannonMethod::Numeric,
            est_error: Some(error.max(floor)),
        }
    }

    fn asymptotic(entropy: f64) -> Self {
        Self {
            entropy,
            length: entropy.exp(),
            method: ShannonMethod::Asymptotic,
            est_error: None,
        }
    }
}

fn shannon_options(ctx: &PrecisionContext) -> AdaptiveOptions {
    // each of the (at most two) integrals gets half the absolute budget
    AdaptiveOptions::from_context(ctx).with_abs_tol(ENTROPY_ABS_TOL / 4.0)
}

/// `int rho_n g dx`, split at the zeros of `p_n`.
fn density_expectation<G>(poly: &Orthonormal, splits: &[f64], opts: &AdaptiveOptions, g: G) -> Result<Integral>
where
    G: Fn(f64, f64, f64, f64) -> f64,
{
    let family = *poly.family();
    integrate_adaptive(
        |a| {
            let ln_p = poly.ln_abs(a.x);
            if ln_p == f64::NEG_INFINITY {
                return 0.0;
            }
            let rho = density_at(poly, a.x, a.from_lower, a.from_upper);
            if rho == 0.0 {
                return 0.0;
            }
            rho * g(a.x, ln_p, a.from_lower, a.from_upper)
        },
        family.interval(),
        splits,
        opts,
    )
}

/// Shannon entropy of `rho_n` by adaptive quadrature with panels split at
/// the zeros of `p_n`.
pub fn shannon_numeric(family: &Family, n: usize, ctx: &PrecisionContext) -> Result<ShannonResult> {
    shannon_numeric_with(family, n, &shannon_options(ctx))
}

/// [`shannon_numeric`] with explicit integrator options.
pub fn shannon_numeric_with(family: &Family, n: usize, opts: &AdaptiveOptions) -> Result<ShannonResult> {
    let poly = Orthonormal::new(family, n);
    let splits = if n == 0 { Vec::new() } else { zeros(family, n)? };
    let log_poly = density_expectation(&poly, &splits, opts, |_, ln_p, _, _| 2.0 * ln_p)?;
    let nf = n as f64;
    let (mean_ln_w, err_ln_w) = match family.kind() {
        FamilyKind::Hermite => (-(nf + 0.5), 0.0),
        FamilyKind::Laguerre => {
            let a = family.alpha();
            let mean_x = 2.0 * nf + a + 1.0;
            if a == 0.0 {
                (-mean_x, 0.0)
            } else {
                let ln_x = density_expectation(&poly, &splits, opts, |_, _, lo, _| lo.ln())?;
                (a * ln_x.value - mean_x, a.abs() * ln_x.error)
            }
        }
        FamilyKind::Jacobi => {
            if family.alpha() == 0.0 && family.beta() == 0.0 {
                (0.0, 0.0)
            } else {
                let f = *family;
                let ln_w = density_expectation(&poly, &splits, opts, move |x, _, lo, hi| f.ln_weight_gaps(x, lo, hi))?;
                (ln_w.value, ln_w.error)
            }
        }
    };
    Ok(ShannonResult::numeric(-log_poly.value - mean_ln_w, log_poly.error + err_ln_w))
}

/// Large-`n` entropy: Hermite `ln sqrt(2n) + ln pi - 1`, Laguerre
/// `(alpha+1) ln n - alpha psi(alpha+n+1) - 1 + ln 2 pi`, Jacobi `ln pi - 1`.
/// Needs `n >= 1` (the Hermite and Laguerre forms take `ln n`).
pub fn shannon_asymptotic(family: &Family, n: usize) -> Result<ShannonResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("asymptotic entropy needs n >= 1".into()));
    }
    let nf = n as f64;
    let s = match family.kind() {
        FamilyKind::Hermite => (2.0 * nf).sqrt().ln() + PI.ln() - 1.0,
        FamilyKind::Laguerre => {
            let a = family.alpha();
            (a + 1.0) * nf.ln() - a * digamma(a + nf + 1.0) - 1.0 + (2.0 * PI).ln()
        }
        FamilyKind::Jacobi => PI.ln() - 1.0,
    };
    Ok(ShannonResult::asymptotic(s))
}

/// `pi sqrt(2) / e = 1.63445...`, the large-`n` slope of `N` against `Delta x`
/// shared by all three families. The decimal 1.6389 often printed next to
/// this expression does not match it.
pub fn ratio_constant() -> f64 {
    PI * 2f64.sqrt() / E
}

/// Numeric `N / Delta x`.
pub fn ratio_check(family: &Family, n: usize, ctx: &PrecisionContext) -> Result<f64> {
    Ok(shannon_numeric(family, n, ctx)?.length / stddev(family, n))
}

/// Hermite bound `2 (e k)^{1/k} Gamma(1/k) / k * <x^k>^{1/k}`, `k` even.
pub fn shannon_bound_hermite(n: usize, k: u32) -> Result<f64> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Hermite bound needs an even k >= 2, got {k}")));
    }
    let kf = f64::from(k);
    let m = moment(&Family::hermite(), n, k)?;
    let ln_bound = 2f64.ln() + (1.0 + kf.ln()) / kf + ln_gamma_f64(1.0 / kf) - kf.ln() + m.ln() / kf;
    Ok(ln_bound.exp())
}

/// Laguerre bound `Gamma(1/b) (b e)^{1/b} / b * <x^b>^{1/b}`, `b > 0` real.
pub fn shannon_bound_laguerre(n: usize, alpha: f64, b: f64) -> Result<f64> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("Laguerre bound needs b > 0, got {b}")));
    }
    Family::laguerre(alpha)?;
    let m = laguerre_moment(n, alpha, b)?;
    let ln_bound = ln_gamma_f64(1.0 / b) + (b.ln() + 1.0) / b - b.ln() + m.ln() / b;
    Ok(ln_bound.exp())
}

/// `N <= 2` on `[-1, 1]`, attained by the uniform density.
pub fn jacobi_trivial_bound() -> f64 {
    2.0
}

/// Best bound and the parameter (`k`, `b`, or `None` for Jacobi) giving it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizedBound {
    pub value: f64,
    pub parameter: Option<f64>,
}

/// Largest even `k` searched for the Hermite bound.
pub const HERMITE_K_MAX: u32 = 20;
const LAGUERRE_B_RANGE: (f64, f64) = (0.02, 10.0);
const LAGUERRE_GRID: usize = 64;

/// Minimizes the family's bound: Hermite over even `k <= HERMITE_K_MAX`,
/// Laguerre over `b` (log grid, then golden section around the best cell).
pub fn optimize_bound(family: &Family, n: usize) -> Result<OptimizedBound> {
    match family.kind() {
        FamilyKind::Hermite => {
            let mut best = OptimizedBound { value: f64::INFINITY, parameter: None };
            for k in (2..=HERMITE_K_MAX).step_by(2) {
                let v = shannon_bound_hermite(n, k)?;
                if v < best.value {
                    best = OptimizedBound { value: v, parameter: Some(f64::from(k)) };
                }
            }
            Ok(best)
        }
        FamilyKind::Laguerre => {
            let alpha = family.alpha();
            let f = |ln_b: f64| shannon_bound_laguerre(n, alpha, ln_b.exp());
            let (lo, hi) = (LAGUERRE_B_RANGE.0.ln(), LAGUERRE_B_RANGE.1.ln());
            let step = (hi - lo) / (LAGUERRE_GRID - 1) as f64;
            let mut best = (lo, f(lo)?);
            for i in 1..LAGUERRE_GRID {
                let t = lo + step * i as f64;
                let v = f(t)?;
                if v < best.1 {
                    best = (t, v);
                }
            }
            let (t, v) = golden_section(&f, (best.0 - step).max(lo), (best.0 + step).min(hi), 1e-10)?;
            let (t, v) = if v < best.1 { (t, v) } else { best };
            Ok(OptimizedBound { value: v, parameter: Some(t.exp()) })
        }
        FamilyKind::Jacobi => Ok(OptimizedBound { value: jacobi_trivial_bound(), parameter: None }),
    }
}

fn golden_section<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// An upper-bound check `lhs <= rhs` with both sides attached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Audit {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl Audit {
    /// `lhs <= rhs` up to the entropy error carried by `lhs = exp(S)` and a
    /// relative rounding allowance on `rhs`, so saturated cases pass.
    pub fn new(lhs: f64, rhs: f64, entropy_error: f64) -> Self {
        let slack = lhs * entropy_error + 1e-12 * rhs.abs();
        Self { lhs, rhs, holds: lhs <= rhs + slack }
    }
}

/// Shannon inequality `N <= sqrt(2 pi e) Delta x`.
pub fn shannon_inequality_check(family: &Family, n: usize, ctx: &PrecisionContext) -> Result<Audit> {
    let s = shannon_numeric(family, n, ctx)?;
    Ok(Audit::new(
        s.length,
        (2.0 * PI * E).sqrt() * stddev(family, n),
        s.est_error.unwrap_or(0.0),
    ))
}

/// `N_numeric <= optimized bound`.
pub fn bound_dominance_check(family: &Family, n: usize, ctx: &PrecisionContext) -> Result<Audit> {
    let s = shannon_numeric(family, n, ctx)?;
    Ok(Audit::new(s.length, optimize_bound(family, n)?.value, s.est_error.unwrap_or(0.0)))
}
