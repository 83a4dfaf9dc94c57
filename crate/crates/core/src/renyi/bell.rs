//! Powers of polynomials through partial Bell polynomials.
//!
//! `[sum_t c_t x^t]^p = sum_t p! / (t+p)! B_{t+p,p}(c_0, 2! c_1, ..., (t+1)! c_t) x^t`
//! with `c_i = 0` beyond the degree, and the power functional is the
//! coefficient sequence paired with the moments of `omega^q`:
//!
//! * Hermite: `sum_j Gamma(j + 1/2) / q^{j+1/2} * coef_{2j}`
//! * Laguerre: `sum_k Gamma(alpha q + k + 1) / q^{alpha q + k + 1} * coef_k`
//! * Jacobi: `sum_k I(k, q, alpha, beta) * coef_k`, with
//!   `I = (-1)^k 2^{1+(a+b)q} Gamma(aq+1) Gamma(bq+1) / Gamma((a+b)q+2) 2F1(-k, 1+bq; 2+(a+b)q; 2)`

use std::collections::HashMap;

use rug::Float;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::orthopoly::{explicit_coeffs, PolyCoeffs};
use crate::precision::{fl, max_rel_diff, PrecisionContext, SignedSum};
use crate::quadrature::WeightSpec;
use crate::special::{binomial_int, factorial};

use super::{length_from_functional, vanishes_by_parity, RenyiOrder};

/// Memoized partial Bell polynomials `B_{m,l}(x_1, x_2, ...)` for one
/// argument sequence; arguments past the end count as zero.
#[derive(Debug, Clone)]
pub struct BellTable {
    args: Vec<Float>,
    prec: u32,
    values: HashMap<(usize, usize), Float>,
}

impl BellTable {
    /// `args[i]` is `x_{i+1}`.
    pub fn new(args: Vec<Float>, prec: u32) -> Self {
        Self {
            args,
            prec,
            values: HashMap::new(),
        }
    }

    pub fn args(&self) -> &[Float] {
        &self.args
    }

    fn arg(&self, i: usize) -> Option<&Float> {
        self.args.get(i - 1).filter(|x| !x.is_zero())
    }

    /// `B_{m,l}` through `B_{m,l} = sum_{i=1}^{m-l+1} C(m-1, i-1) x_i B_{m-i,l-1}`.
    pub fn get(&mut self, m: usize, l: usize) -> Float {
        if l > m {
            return fl(self.prec, 0);
        }
        if l == 0 {
            return fl(self.prec, u32::from(m == 0));
        }
        if let Some(v) = self.values.get(&(m, l)) {
            return v.clone();
        }
        let mut acc = fl(self.prec, 0);
        for i in 1..=(m - l + 1) {
            let Some(x) = self.arg(i).cloned() else { continue };
            let rest = self.get(m - i, l - 1);
            if rest.is_zero() {
                continue;
            }
            acc += binomial_int(self.prec, (m - 1) as u64, (i - 1) as u64) * x * rest;
        }
        self.values.insert((m, l), acc.clone());
        acc
    }
}

/// Partial Bell polynomial `B_{m,l}` by the recurrence.
pub fn bell_polynomial(m: usize, l: usize, args: &[Float]) -> Float {
    let prec = args.iter().map(Float::prec).max().unwrap_or(64);
    BellTable::new(args.to_vec(), prec).get(m, l)
}

/// `B_{m,l}` by summing over all partitions `j_1 + ... = l`, `j_1 + 2 j_2 + ... = m`
/// of `m!/prod j_i! prod (x_i / i!)^{j_i}`. Exponential cost; a test oracle.
pub fn bell_polynomial_enumerated(m: usize, l: usize, args: &[Float]) -> Float {
    let prec = args.iter().map(Float::prec).max().unwrap_or(64);
    if l > m {
        return fl(prec, 0);
    }
    if m == 0 {
        return fl(prec, 1);
    }
    let width = m - l + 1;
    let mut scaled = Vec::with_capacity(width);
    for i in 1..=width {
        let x = args.get(i - 1).cloned().unwrap_or_else(|| fl(prec, 0));
        scaled.push(x / factorial(prec, i as u64));
    }
    let mut js = vec![0usize; width];
    let mut total = fl(prec, 0);
    enumerate_partitions(&scaled, 0, l, m, &mut js, &mut total, prec);
    total * factorial(prec, m as u64)
}

fn enumerate_partitions(
    scaled: &[Float],
    idx: usize,
    parts_left: usize,
    weight_left: usize,
    js: &mut [usize],
    total: &mut Float,
    prec: u32,
) {
    if idx == scaled.len() {
        if parts_left == 0 && weight_left == 0 {
            let mut term = fl(prec, 1);
            for (i, &j) in js.iter().enumerate() {
                if j > 0 {
                    let mut p = scaled[i].clone();
                    rug::ops::PowAssign::pow_assign(&mut p, j as u32);
                    term *= p;
                    term /= factorial(prec, j as u64);
                }
            }
            *total += term;
        }
        return;
    }
    let size = idx + 1;
    let max_j = parts_left.min(weight_left / size);
    for j in 0..=max_j {
        js[idx] = j;
        enumerate_partitions(scaled, idx + 1, parts_left - j, weight_left - j * size, js, total, prec);
    }
    js[idx] = 0;
}

/// Coefficients of `y^power` for `y = sum_t c_t x^t`, at the precision of `coeffs`.
pub fn power_coeffs_of(coeffs: &[Float], power: u32) -> Vec<Float> {
    let prec = coeffs.iter().map(Float::prec).max().unwrap_or(64);
    let n = coeffs.len().saturating_sub(1);
    let p = power as usize;
    // x_i = i! c_{i-1}
    let args: Vec<Float> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| Float::with_val(prec, c * factorial(prec, i as u64 + 1)))
        .collect();
    let mut table = BellTable::new(args, prec);
    let p_fact = factorial(prec, p as u64);
    (0..=n * p)
        .map(|t| table.get(t + p, p) * &p_fact / factorial(prec, (t + p) as u64))
        .collect()
}

/// Coefficients of `p_n^power`, accepted once two precisions agree.
pub fn power_coeffs(p: &PolyCoeffs, power: u32, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    if power == 0 {
        return Err(Error::InvalidArgument("polynomial power must be >= 1".into()));
    }
    let (family, n) = (*p.family(), p.degree());
    ctx.escalate(
        "polynomial power coefficients",
        |prec| Ok(power_coeffs_of(&explicit_coeffs(&family, n, prec), power)),
        |a, b| max_rel_diff(a, b),
    )
}

/// `W_q` from the Bell expansion at a fixed precision.
pub fn power_functional_bell_at(family: &Family, n: usize, q: RenyiOrder, prec: u32) -> Result<Float> {
    Ok(bell_signed_sum(family, n, q, prec)?.value)
}

fn bell_signed_sum(family: &Family, n: usize, q: RenyiOrder, prec: u32) -> Result<SignedSum> {
    q.check_integrable(family)?;
    let coeffs = power_coeffs_of(&explicit_coeffs(family, n, prec), q.two_q());
    let mut acc = SignedSum::new(prec);
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc.add(WeightSpec::power_moment(family, q.q(), k as u32, prec)? * c);
    }
    Ok(acc)
}

/// `W_q = int p_n^{2q} omega^q` through the Bell expansion.
pub fn power_functional_bell(family: &Family, n: usize, q: RenyiOrder, ctx: &PrecisionContext) -> Result<f64> {
    q.check_integrable(family)?;
    if vanishes_by_parity(family, n, q) {
        return Ok(0.0);
    }
    let w = ctx.escalate(
        "Bell power functional",
        |prec| bell_signed_sum(family, n, q, prec),
        SignedSum::disagreement,
    )?;
    Ok(w.resolve().to_f64())
}

/// Rényi length `W_q^{-1/(q-1)}` through the Bell expansion.
pub fn renyi_length_bell(family: &Family, n: usize, q: RenyiOrder, ctx: &PrecisionContext) -> Result<f64> {
    if q.is_shannon() {
        return length_from_functional(1.0, q);
    }
    length_from_functional(power_functional_bell(family, n, q, ctx)?, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::rel_diff;
    use std::f64::consts::PI;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn floats(v: &[f64]) -> Vec<Float> {
        v.iter().map(|&x| fl(128, x)).collect()
    }

    #[test]
    fn bell_examples() {
        let args = floats(&[1.5, -2.25, 0.75, 3.0]);
        assert_eq!(bell_polynomial(4, 1, &args), args[3]);
        assert_eq!(bell_polynomial(2, 2, &args), fl(128, 1.5 * 1.5));
        assert_eq!(bell_polynomial(3, 2, &args), fl(128, 3.0 * 1.5 * -2.25));
        assert_eq!(bell_polynomial(0, 0, &args), fl(128, 1));
        assert!(bell_polynomial(2, 3, &args).is_zero());
    }

    #[test]
    fn recurrence_matches_enumeration() {
        let args = floats(&[0.5, -1.0, 2.0, 0.25, -3.0, 1.5, 0.0, 2.5, -0.5, 1.0, 0.75, -2.0]);
        for m in 0..=12 {
            for l in 0..=m {
                let a = bell_polynomial(m, l, &args);
                let b = bell_polynomial_enumerated(m, l, &args);
                assert!(rel_diff(&a, &b) < 1e-30 || (a.is_zero() && b.is_zero()), "B({m},{l}): {a} vs {b}");
            }
        }
    }

    #[test]
    fn power_examples() {
        let c = floats(&[2.0, -3.0]);
        let sq = power_coeffs_of(&c, 2);
        assert_eq!(sq, floats(&[4.0, -12.0, 9.0]));
        let c = floats(&[0.5, 1.25, -0.75]);
        assert_eq!(power_coeffs_of(&c, 1), c);
    }

    #[test]
    fn hermite_onicescu_values() {
        let q = RenyiOrder::integer(2).unwrap();
        let root = (2.0 * PI).sqrt();
        for (n, expected) in [(0, root), (1, 4.0 / 3.0 * root), (2, 64.0 / 41.0 * root)] {
            let l = renyi_length_bell(&Family::hermite(), n, q, &ctx()).unwrap();
            assert!((l - expected).abs() <= 1e-13 * expected, "n={n}: {l}");
        }
    }

    #[test]
    fn exact_cancellation_is_zero_not_exhaustion() {
        // Laguerre(-1/2), n = 1, q = 3/2: E[(x - 1/2)^3] = 0 under Gamma(1/4, rate 3/2)
        let fam = Family::laguerre(-0.5).unwrap();
        let q = RenyiOrder::new(3).unwrap();
        assert_eq!(power_functional_bell(&fam, 1, q, &ctx()).unwrap(), 0.0);
        assert_eq!(crate::quadrature::integrate_density_power(&fam, 1, q, &ctx()).unwrap(), 0.0);
        assert_eq!(super::super::power_functional_lauricella(1, -0.5, q, &ctx()).unwrap(), 0.0);
        assert!(matches!(
            renyi_length_bell(&fam, 1, q, &ctx()),
            Err(Error::NonPositiveFunctional { .. })
        ));
    }

    #[test]
    fn small_hand_values() {
        let q = RenyiOrder::integer(2).unwrap();
        let l = renyi_length_bell(&Family::laguerre(0.0).unwrap(), 1, q, &ctx()).unwrap();
        assert!((l - 4.0).abs() < 1e-13);
        let j = renyi_length_bell(&Family::jacobi(0.0, 0.0).unwrap(), 0, q, &ctx()).unwrap();
        assert!((j - 2.0).abs() < 1e-13);
        let one = RenyiOrder::new(2).unwrap();
        let w = power_functional_bell(&Family::jacobi(2.0, 5.0).unwrap(), 5, one, &ctx()).unwrap();
        assert!((w - 1.0).abs() < 1e-13);
        assert!(renyi_length_bell(&Family::hermite(), 1, one, &ctx()).is_err());
    }
}
