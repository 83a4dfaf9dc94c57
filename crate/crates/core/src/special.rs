//! Gamma-type functions, Pochhammer symbols and terminating hypergeometric sums.
//!
//! Gamma and log-gamma come from MPFR and are correctly rounded at the working
//! precision. The digamma used by the Laguerre entropy asymptotics is a plain
//! f64 implementation (asymptotic series after upward shift).

use rug::ops::PowAssign;
use rug::Float;

use crate::error::{Error, Result};
use crate::precision::fl;

/// Precision used for f64-valued gamma evaluations.
const F64_GAMMA_PREC: u32 = 128;

/// `Gamma(x)` at precision `prec`.
pub fn gamma(prec: u32, x: f64) -> Float {
    fl(prec, x).gamma()
}

/// `Gamma(x)` at the precision of `x`. Shifted parameters such as `alpha + t + 1`
/// must be formed in extended precision and passed here: rounding them to f64
/// first is amplified by the cancelling sums downstream.
pub fn gamma_ext(x: &Float) -> Float {
    Float::with_val(x.prec(), x.gamma_ref())
}

pub fn gamma_f64(x: f64) -> f64 {
    gamma(F64_GAMMA_PREC, x).to_f64()
}

pub fn ln_gamma_f64(x: f64) -> f64 {
    fl(F64_GAMMA_PREC, x).ln_gamma().to_f64()
}

/// Rising factorial `(a)_k`.
pub fn pochhammer(a: &Float, k: u32) -> Float {
    let mut acc = fl(a.prec(), 1);
    for j in 0..k {
        acc *= Float::with_val(a.prec(), a + j);
    }
    acc
}

/// Binomial coefficient `C(n, k)` for integer arguments, exact up to the precision.
pub fn binomial_int(prec: u32, n: u64, k: u64) -> Float {
    if k > n {
        return fl(prec, 0);
    }
    let k = k.min(n - k);
    let mut acc = fl(prec, 1);
    for j in 0..k {
        acc *= n - j;
        acc /= j + 1;
    }
    acc
}

/// Generalized binomial `C(x, k) = x (x-1) ... (x-k+1) / k!` for real `x`.
pub fn binomial_real(x: &Float, k: u64) -> Float {
    let mut acc = fl(x.prec(), 1);
    for j in 0..k {
        acc *= Float::with_val(x.prec(), x - j);
        acc /= j + 1;
    }
    acc
}

/// `k!` as a float.
pub fn factorial(prec: u32, k: u64) -> Float {
    let mut acc = fl(prec, 1);
    for j in 2..=k {
        acc *= j;
    }
    acc
}

/// Terminating Gauss series `2F1(-k, b; c; z) = sum_{j<=k} (-k)_j (b)_j / (c)_j z^j / j!`.
///
/// Fails when `c + j` vanishes for some `j < k` (undefined term before
/// termination).
pub fn terminating_2f1(k: u32, b: &Float, c: &Float, z: &Float) -> Result<Float> {
    let prec = b.prec().max(c.prec()).max(z.prec());
    let mut term = fl(prec, 1);
    let mut sum = fl(prec, 1);
    for j in 0..k {
        let cj = Float::with_val(prec, c + j);
        if cj.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "2F1 lower parameter c = {} hits a pole at index {j}",
                c.to_f64()
            )));
        }
        // (-k + j)(b + j) / ((c + j)(j + 1)) * z
        term *= i64::from(j) - i64::from(k);
        term *= Float::with_val(prec, b + j);
        term /= cj;
        term /= j + 1;
        term *= z;
        sum += &term;
    }
    Ok(sum)
}

/// Terminating series `2F0(-m, b; ; z) = sum_{j<=m} (-m)_j (b)_j z^j / j!`.
pub fn terminating_2f0(m: u32, b: &Float, z: &Float) -> Float {
    let prec = b.prec().max(z.prec());
    let mut term = fl(prec, 1);
    let mut sum = fl(prec, 1);
    for j in 0..m {
        term *= i64::from(j) - i64::from(m);
        term *= Float::with_val(prec, b + j);
        term /= j + 1;
        term *= z;
        sum += &term;
    }
    sum
}

/// `int_{-1}^{1} x^k (1-x)^a (1+x)^b dx`
/// `= (-1)^k 2^{1+a+b} Gamma(a+1) Gamma(b+1) / Gamma(a+b+2) * 2F1(-k, 1+b; 2+a+b; 2)`.
pub fn jacobi_weight_moment(k: u32, a: f64, b: f64, prec: u32) -> Result<Float> {
    jacobi_weight_moment_ext(k, &fl(prec, a), &fl(prec, b))
}

/// [`jacobi_weight_moment`] with exponents given in extended precision.
pub fn jacobi_weight_moment_ext(k: u32, a: &Float, b: &Float) -> Result<Float> {
    if !(*a > -1 && *b > -1) {
        return Err(Error::Divergent(format!(
            "Jacobi-type weight exponents must exceed -1, got ({}, {})",
            a.to_f64(),
            b.to_f64()
        )));
    }
    let prec = a.prec().max(b.prec());
    let s = Float::with_val(prec, a + b);
    let mut prefactor = fl(prec, 2);
    prefactor.pow_assign(&Float::with_val(prec, &s + 1u32));
    prefactor *= gamma_ext(&Float::with_val(prec, a + 1u32));
    prefactor *= gamma_ext(&Float::with_val(prec, b + 1u32));
    prefactor /= gamma_ext(&Float::with_val(prec, &s + 2u32));
    if k % 2 == 1 {
        prefactor = -prefactor;
    }
    let series = terminating_2f1(
        k,
        &Float::with_val(prec, b + 1u32),
        &Float::with_val(prec, &s + 2u32),
        &fl(prec, 2),
    )?;
    Ok(prefactor * series)
}

/// Digamma `psi(x)` for `x > 0`: shift up with `psi(x) = psi(x+1) - 1/x`
/// until `x >= 10`, then the asymptotic Bernoulli series.
pub fn digamma(x: f64) -> f64 {
    if !(x > 0.0) {
        return f64::NAN;
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    // B_{2k} / (2k) for k = 1..7
    const COEFFS: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let mut series = 0.0;
    for c in COEFFS.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv2;
    y.ln() - 0.5 / y - series + shift
}
