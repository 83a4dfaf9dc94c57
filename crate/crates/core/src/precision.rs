//! Working precision and the two-precision agreement check.
//!
//! Every extended-precision quantity is computed at `bits` and at `2 * bits`;
//! the higher-precision value is accepted once the two agree to `rel_tol`.
//! Otherwise the precision keeps doubling, at most `max_escalations` times.

use rug::Float;

use crate::error::{Error, Result};

/// Smallest admissible working precision (one IEEE double mantissa).
pub const MIN_BITS: u32 = 53;

pub const ENV_BITS: &str = "SPREADPOLY_BITS";
pub const ENV_RTOL: &str = "SPREADPOLY_RTOL";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    bits: u32,
    rel_tol: f64,
    max_escalations: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            bits: 256,
            rel_tol: 1e-12,
            max_escalations: 3,
        }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32, rel_tol: f64, max_escalations: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::InvalidArgument(format!(
                "working precision must be at least {MIN_BITS} bits, got {bits}"
            )));
        }
        if !(rel_tol > 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "relative tolerance must be positive, got {rel_tol}"
            )));
        }
        Ok(Self {
            bits,
            rel_tol,
            max_escalations,
        })
    }

    /// Default context with `SPREADPOLY_BITS` / `SPREADPOLY_RTOL` applied when set.
    pub fn from_env() -> Result<Self> {
        let mut ctx = Self::default();
        if let Ok(v) = std::env::var(ENV_BITS) {
            let bits = v
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("{ENV_BITS}={v} is not an integer")))?;
            ctx = ctx.with_bits(bits)?;
        }
        if let Ok(v) = std::env::var(ENV_RTOL) {
            let tol = v
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("{ENV_RTOL}={v} is not a number")))?;
            ctx = ctx.with_rel_tol(tol)?;
        }
        Ok(ctx)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_escalations(&self) -> u32 {
        self.max_escalations
    }

    pub fn with_bits(self, bits: u32) -> Result<Self> {
        Self::new(bits, self.rel_tol, self.max_escalations)
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Result<Self> {
        Self::new(self.bits, rel_tol, self.max_escalations)
    }

    pub fn with_max_escalations(self, max_escalations: u32) -> Self {
        Self {
            max_escalations,
            ..self
        }
    }

    /// Runs `compute` at increasing precisions until two consecutive results
    /// agree according to `disagreement`, returning the more precise one.
    pub fn escalate<T, F, D>(&self, quantity: &'static str, mut compute: F, disagreement: D) -> Result<T>
    where
        F: FnMut(u32) -> Result<T>,
        D: Fn(&T, &T) -> f64,
    {
        let mut prec = self.bits;
        let mut previous = compute(prec)?;
        let mut last = f64::INFINITY;
        for _ in 0..=self.max_escalations {
            prec = prec.saturating_mul(2);
            let next = compute(prec)?;
            last = disagreement(&previous, &next);
            if last <= self.rel_tol {
                return Ok(next);
            }
            previous = next;
        }
        Err(Error::PrecisionExhausted {
            quantity,
            bits: prec,
            disagreement: last,
        })
    }
}

/// Shorthand for a float at precision `prec`.
pub fn fl<T>(prec: u32, value: T) -> Float
where
    Float: rug::Assign<T>,
{
    Float::with_val(prec, value)
}

/// `|a - b| / |b|`, with `0` when both vanish.
pub fn rel_diff(a: &Float, b: &Float) -> f64 {
    if a == b {
        return 0.0;
    }
    let diff = Float::with_val(b.prec().max(a.prec()), a - b).abs();
    if b.is_zero() {
        return f64::INFINITY;
    }
    (diff / b.clone().abs()).to_f64()
}

/// Norm-wise relative difference `max |a_i - b_i| / max |b_i|`.
pub fn max_rel_diff(a: &[Float], b: &[Float]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        let d = Float::with_val(y.prec().max(x.prec()), x - y).abs().to_f64();
        num = num.max(d);
        den = den.max(y.to_f64().abs());
    }
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

/// A sum with cancellation, carried with `sum |terms|` so an exact zero can be
/// told apart from rounding noise.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedSum {
    pub value: Float,
    pub mass: Float,
}

impl SignedSum {
    pub fn new(prec: u32) -> Self {
        Self {
            value: fl(prec, 0),
            mass: fl(prec, 0),
        }
    }

    pub fn add(&mut self, term: Float) {
        self.mass += term.clone().abs();
        self.value += term;
    }

    /// Noise level of `value`: `mass * 2^{-3p/4}`.
    fn noise(&self) -> Float {
        let p = self.value.prec();
        let mut eps = fl(p, 2);
        rug::ops::PowAssign::pow_assign(&mut eps, -((3 * p / 4) as i32));
        Float::with_val(p, &self.mass * eps)
    }

    /// Agreement of two precisions: relative, except that two values both
    /// inside the noise of the lower precision agree (the sum is zero).
    pub fn disagreement(a: &SignedSum, b: &SignedSum) -> f64 {
        let noise = a.noise();
        if a.value.clone().abs() <= noise && b.value.clone().abs() <= noise {
            return 0.0;
        }
        rel_diff(&a.value, &b.value)
    }

    /// The value, snapped to exactly zero when it is within rounding noise.
    pub fn resolve(self) -> Float {
        if self.value.clone().abs() <= self.noise() {
            fl(self.value.prec(), 0)
        } else {
            self.value
        }
    }
}
