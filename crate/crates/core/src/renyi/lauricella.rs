//! Laguerre Rényi lengths through the Srivastava-Niukkanen linearization and
//! terminating Lauricella `F_A` sums.
//!
//! With `L_n` the classical Laguerre polynomial,
//! `Theta_k = int_0^inf e^{-u} u^{alpha q} L_n(u/q)^{2q} L_k(u) du`
//! `= Gamma(alpha q + 1) C(n+alpha, n)^{2q} F_A(alpha q + 1; -n, ..., -n, -k; alpha+1, ..., alpha+1, 1; 1/q, ..., 1/q, 1)`
//! and only `Theta_0` enters the power functional:
//! `W_q = (n!/Gamma(alpha+n+1))^q q^{-(alpha q + 1)} Theta_0`, up to the sign
//! `(-1)^{n two_q}` relating `L_n` to the orthonormal `p_n` with positive
//! leading coefficient.

use rug::ops::PowAssign;
use rug::Float;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::precision::{fl, PrecisionContext, SignedSum};
use crate::special::{binomial_real, factorial, gamma_ext, pochhammer, terminating_2f0};

use super::{length_from_functional, RenyiOrder};

/// Default cap on the number of multi-indices visited by the enumeration oracle.
pub const ENUMERATION_BUDGET: u128 = 50_000_000;

/// Upper parameter as a termination count `N` (the parameter is `-N`).
fn termination_count(b: f64) -> Result<usize> {
    if b <= 0.0 && b.fract() == 0.0 && b.is_finite() {
        Ok((-b) as usize)
    } else {
        Err(Error::NonTerminating(format!(
            "Lauricella upper parameter {b} is not a nonpositive integer"
        )))
    }
}

/// Per-variable factors `g(m) = (b)_m / ((c)_m m!) z^m`, `m = 0..=N`, built incrementally.
fn variable_factors(b: f64, c: &Float, z: &Float, prec: u32) -> Result<Vec<Float>> {
    let count = termination_count(b)?;
    let mut g = Vec::with_capacity(count + 1);
    let mut term = fl(prec, 1);
    g.push(term.clone());
    for m in 0..count {
        let cm = Float::with_val(prec, c + m as u32);
        if cm.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "Lauricella lower parameter {} hits a pole at index {m}",
                c.to_f64()
            )));
        }
        term *= fl(prec, b) + m as u32;
        term /= cm;
        term /= m as u32 + 1;
        term *= z;
        g.push(term.clone());
    }
    Ok(g)
}

fn check_lengths(upper: &[f64], lower: &[f64], z: &[f64]) -> Result<()> {
    if upper.len() != lower.len() || upper.len() != z.len() {
        return Err(Error::InvalidArgument(format!(
            "Lauricella parameter lengths differ: {} upper, {} lower, {} variables",
            upper.len(),
            lower.len(),
            z.len()
        )));
    }
    Ok(())
}

/// Terminating `F_A(a; b_1..b_r; c_1..c_r; z_1..z_r)` with every `b_i` a
/// nonpositive integer.
///
/// The multi-sum only depends on the multi-index through `(a)_{|m|}` and a
/// product of per-variable factors, so the factors are convolved over the
/// total degree `|m|` first: `F = sum_M (a)_M G(M)`. Cost is quadratic in
/// `sum N_i` instead of `prod (N_i + 1)`.
pub fn lauricella_fa_terminating(a: f64, upper: &[f64], lower: &[f64], z: &[f64], prec: u32) -> Result<Float> {
    check_lengths(upper, lower, z)?;
    let z: Vec<Float> = z.iter().map(|&v| fl(prec, v)).collect();
    let lower: Vec<Float> = lower.iter().map(|&v| fl(prec, v)).collect();
    Ok(fa_signed_sum(&fl(prec, a), upper, &lower, &z, prec)?.value)
}

/// The convolution sum together with the same sum over absolute values.
fn fa_signed_sum(a: &Float, upper: &[f64], lower: &[Float], z: &[Float], prec: u32) -> Result<SignedSum> {
    if upper.len() != z.len() || upper.len() != lower.len() {
        return Err(Error::InvalidArgument("Lauricella parameter lengths differ".into()));
    }
    let mut total = vec![fl(prec, 1)];
    let mut total_abs = vec![fl(prec, 1)];
    for ((&b, c), zi) in upper.iter().zip(lower).zip(z) {
        let g = variable_factors(b, c, zi, prec)?;
        total = convolve(&total, &g, prec, false);
        total_abs = convolve(&total_abs, &g, prec, true);
    }
    let mut acc = SignedSum::new(prec);
    let mut rising = fl(prec, 1);
    for (m, (gm, gm_abs)) in total.iter().zip(&total_abs).enumerate() {
        if m > 0 {
            rising *= Float::with_val(prec, a + (m as u32 - 1));
        }
        acc.value += Float::with_val(prec, &rising * gm);
        acc.mass += Float::with_val(prec, &rising * gm_abs).abs();
    }
    Ok(acc)
}

fn convolve(t: &[Float], g: &[Float], prec: u32, absolute: bool) -> Vec<Float> {
    let mut next = vec![fl(prec, 0); t.len() + g.len() - 1];
    for (i, ti) in t.iter().enumerate() {
        if ti.is_zero() {
            continue;
        }
        for (j, gj) in g.iter().enumerate() {
            let term = Float::with_val(prec, ti * gj);
            next[i + j] += if absolute { term.abs() } else { term };
        }
    }
    next
}

/// The same sum by literal enumeration of every multi-index, innermost
/// index fastest. Fails with `BudgetExceeded` above `budget` multi-indices.
pub fn lauricella_fa_enumerated(a: f64, upper: &[f64], lower: &[f64], z: &[f64], prec: u32, budget: u128) -> Result<Float> {
    check_lengths(upper, lower, z)?;
    let factors: Vec<Vec<Float>> = upper
        .iter()
        .zip(lower)
        .zip(z)
        .map(|((&b, &c), &zi)| variable_factors(b, &fl(prec, c), &fl(prec, zi), prec))
        .collect::<Result<_>>()?;
    let needed = factors.iter().fold(1u128, |acc, g| acc.saturating_mul(g.len() as u128));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let max_total: usize = factors.iter().map(|g| g.len() - 1).sum();
    let af = fl(prec, a);
    let rising: Vec<Float> = (0..=max_total as u32).map(|m| pochhammer(&af, m)).collect();
    let r = factors.len();
    let mut idx = vec![0usize; r];
    let mut acc = fl(prec, 0);
    loop {
        let mut term = rising[idx.iter().sum::<usize>()].clone();
        for (g, &m) in factors.iter().zip(&idx) {
            term *= &g[m];
        }
        acc += term;
        // odometer, last index fastest
        let mut pos = r;
        loop {
            if pos == 0 {
                return Ok(acc);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < factors[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `Theta_k` of the linearization of `u^{alpha q} L_n(u/q)^{2q}` onto `L_k(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaCoefficient {
    pub n: usize,
    pub q: RenyiOrder,
    pub alpha: f64,
    pub k: usize,
    pub value: Float,
}

fn laguerre_guard(alpha: f64, q: RenyiOrder) -> Result<Family> {
    let family = Family::laguerre(alpha)?;
    q.check_integrable(&family)?;
    Ok(family)
}

/// `alpha q + 1` in working precision; `q = two_q / 2` is exact.
fn alpha_q_plus_one(alpha: f64, q: RenyiOrder, prec: u32) -> Float {
    fl(prec, alpha) * q.two_q() / 2u32 + 1u32
}

/// Lower parameters `alpha + 1` for the `2q` equal blocks, then `1` for the last variable.
fn lower_parameters(alpha: f64, q: RenyiOrder, prec: u32) -> Vec<Float> {
    let mut lower = vec![fl(prec, alpha) + 1u32; q.two_q() as usize];
    lower.push(fl(prec, 1));
    lower
}

fn theta_at(n: usize, q: RenyiOrder, alpha: f64, k: usize, prec: u32) -> Result<SignedSum> {
    let r = q.two_q() as usize;
    let mut upper = vec![-(n as f64); r];
    let mut z = vec![fl(prec, 2) / q.two_q(); r];
    upper.push(-(k as f64));
    z.push(fl(prec, 1));
    let aq1 = alpha_q_plus_one(alpha, q, prec);
    let fa = fa_signed_sum(&aq1, &upper, &lower_parameters(alpha, q, prec), &z, prec)?;
    let mut binom = binomial_real(&(fl(prec, n) + alpha), n as u64);
    binom.pow_assign(q.two_q());
    let prefactor = gamma_ext(&aq1) * binom;
    Ok(SignedSum {
        value: Float::with_val(prec, &prefactor * &fa.value),
        mass: Float::with_val(prec, &prefactor * &fa.mass).abs(),
    })
}

pub fn theta_coefficient(n: usize, q: RenyiOrder, alpha: f64, k: usize, ctx: &PrecisionContext) -> Result<ThetaCoefficient> {
    laguerre_guard(alpha, q)?;
    let value = ctx
        .escalate("Theta coefficient", |prec| theta_at(n, q, alpha, k, prec), SignedSum::disagreement)?
        .resolve();
    Ok(ThetaCoefficient { n, q, alpha, k, value })
}

/// `W_q` of the Laguerre density from the `F_A` display at a fixed precision.
pub fn power_functional_lauricella_at(n: usize, alpha: f64, q: RenyiOrder, prec: u32) -> Result<Float> {
    Ok(lauricella_signed_sum(n, alpha, q, prec)?.value)
}

fn lauricella_signed_sum(n: usize, alpha: f64, q: RenyiOrder, prec: u32) -> Result<SignedSum> {
    laguerre_guard(alpha, q)?;
    let qf = q.q();
    let r = q.two_q() as usize;
    // last variable carries upper parameter 0 and contributes a factor 1
    let mut upper = vec![-(n as f64); r];
    // 1/q = 2/two_q exactly
    let mut z = vec![fl(prec, 2) / q.two_q(); r];
    upper.push(0.0);
    z.push(fl(prec, 1));
    let aq1 = alpha_q_plus_one(alpha, q, prec);
    let fa = fa_signed_sum(&aq1, &upper, &lower_parameters(alpha, q, prec), &z, prec)?;
    let mut ratio = factorial(prec, n as u64) / gamma_ext(&(fl(prec, alpha) + fl(prec, n as u64 + 1)));
    ratio.pow_assign(&fl(prec, qf));
    let mut q_pow = fl(prec, qf);
    q_pow.pow_assign(&aq1);
    let mut binom = binomial_real(&(fl(prec, n) + alpha), n as u64);
    binom.pow_assign(q.two_q());
    let mut prefactor = ratio * gamma_ext(&aq1) / q_pow * binom;
    if (n as u64 * u64::from(q.two_q())) % 2 == 1 {
        prefactor = -prefactor;
    }
    Ok(SignedSum {
        value: Float::with_val(prec, &prefactor * &fa.value),
        mass: Float::with_val(prec, &prefactor * &fa.mass).abs(),
    })
}

pub fn power_functional_lauricella(n: usize, alpha: f64, q: RenyiOrder, ctx: &PrecisionContext) -> Result<f64> {
    let w = ctx.escalate(
        "Lauricella power functional",
        |prec| lauricella_signed_sum(n, alpha, q, prec),
        SignedSum::disagreement,
    )?;
    Ok(w.resolve().to_f64())
}

/// Laguerre Rényi length from the `F_A` display.
pub fn renyi_length_laguerre_lauricella(n: usize, alpha: f64, q: RenyiOrder, ctx: &PrecisionContext) -> Result<f64> {
    if q.is_shannon() {
        return length_from_functional(1.0, q);
    }
    length_from_functional(power_functional_lauricella(n, alpha, q, ctx)?, q)
}

/// `n = 0`: `[Gamma(alpha q + 1) / (Gamma(alpha+1)^q q^{alpha q + 1})]^{-1/(q-1)}`.
pub fn laguerre_n0_closed_form(alpha: f64, q: RenyiOrder) -> Result<f64> {
    let prec = 256;
    laguerre_guard(alpha, q)?;
    let qf = q.q();
    let aq1 = alpha_q_plus_one(alpha, q, prec);
    let mut den = gamma_ext(&(fl(prec, alpha) + 1u32));
    den.pow_assign(&fl(prec, qf));
    let mut q_pow = fl(prec, qf);
    q_pow.pow_assign(&aq1);
    let w = gamma_ext(&aq1) / (den * q_pow);
    length_from_functional(w.to_f64(), q)
}

/// `n = 1`: `[Gamma(aq+1)(1+a)^{2q} / (Gamma(a+2)^q q^{aq+1}) 2F0(-2q, aq+1; ; 1/(q(a+1)))]^{-1/(q-1)}`,
/// with the sign `(-1)^{two_q}` for the orthonormal convention.
pub fn laguerre_n1_closed_form(alpha: f64, q: RenyiOrder) -> Result<f64> {
    let prec = 256;
    laguerre_guard(alpha, q)?;
    let qf = q.q();
    let aq1 = alpha_q_plus_one(alpha, q, prec);
    let one_plus = fl(prec, alpha) + 1u32;
    let z = Float::with_val(prec, &one_plus * qf).recip();
    let mut one_plus_pow = one_plus.clone();
    one_plus_pow.pow_assign(q.two_q());
    let mut den = gamma_ext(&(one_plus + 1u32));
    den.pow_assign(&fl(prec, qf));
    let mut q_pow = fl(prec, qf);
    q_pow.pow_assign(&aq1);
    let f = terminating_2f0(q.two_q(), &aq1, &z);
    let mut w = gamma_ext(&aq1) * one_plus_pow / (den * q_pow) * f;
    if q.two_q() % 2 == 1 {
        w = -w;
    }
    length_from_functional(w.to_f64(), q)
}
