//! Orthonormal Hermite, Laguerre and Jacobi polynomials.
//!
//! Three-term recurrence `x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}` for
//! the orthonormal polynomials, with the standard coefficients (Gautschi,
//! *Orthogonal Polynomials: Computation and Approximation*, Table 1.1; DLMF
//! 18.9.1-18.9.2 rescaled to unit norm):
//!
//! | family   | `a_k`                                   | `b_k^2`                                                      |
//! |----------|-----------------------------------------|--------------------------------------------------------------|
//! | Hermite  | `0`                                     | `k / 2`                                                      |
//! | Laguerre | `2k + a + 1`                            | `k (k + a)`                                                  |
//! | Jacobi   | `(b^2 - a^2) / ((2k+s)(2k+s+2))`        | `4k(k+a)(k+b)(k+s) / ((2k+s)^2 (2k+s+1)(2k+s-1))`, `s = a+b` |
//!
//! Monomial coefficients use the explicit hypergeometric forms, normalized so
//! the leading coefficient is positive (signs do not affect `p_n^2`).

use nalgebra::{DMatrix, SymmetricEigen};
use rug::ops::PowAssign;
use rug::Float;

use crate::error::{Error, Result};
use crate::family::{Family, FamilyKind};
use crate::precision::{fl, max_rel_diff, PrecisionContext};
use crate::special::{binomial_int, factorial, gamma_ext};

/// Precision used to derive the f64 recurrence tables.
const TABLE_PREC: u32 = 128;

/// Recurrence coefficients `(a_k, b_k)` for `k = 0..=n`, with `b_0 = 0`.
pub fn recurrence_coeffs(family: &Family, n: usize) -> Vec<(f64, f64)> {
    recurrence_coeffs_ext(family, n, TABLE_PREC)
        .into_iter()
        .map(|(a, b)| (a.to_f64(), b.to_f64()))
        .collect()
}

pub(crate) fn recurrence_coeffs_ext(family: &Family, n: usize, prec: u32) -> Vec<(Float, Float)> {
    (0..=n).map(|k| recurrence_term(family, k as u64, prec)).collect()
}

fn recurrence_term(family: &Family, k: u64, prec: u32) -> (Float, Float) {
    let alpha = fl(prec, family.alpha());
    let beta = fl(prec, family.beta());
    match family.kind() {
        FamilyKind::Hermite => (fl(prec, 0), (fl(prec, k) / 2u32).sqrt()),
        FamilyKind::Laguerre => {
            let a = fl(prec, 2 * k + 1) + &alpha;
            let b = (fl(prec, k) * (fl(prec, k) + &alpha)).sqrt();
            (a, b)
        }
        FamilyKind::Jacobi => {
            let s = Float::with_val(prec, &alpha + &beta);
            let a = if k == 0 {
                Float::with_val(prec, &beta - &alpha) / (fl(prec, 2) + &s)
            } else {
                let num = Float::with_val(prec, beta.square_ref()) - Float::with_val(prec, alpha.square_ref());
                let t = fl(prec, 2 * k) + &s;
                num / (t.clone() * (t + 2u32))
            };
            let b = if k == 0 {
                fl(prec, 0)
            } else if k == 1 {
                // (k + s) cancels against (2k + s - 1)
                let t = fl(prec, 2) + &s;
                let num = (fl(prec, 1) + &alpha) * (fl(prec, 1) + &beta) * 4u32;
                (num / (t.clone().square() * (t + 1u32))).sqrt()
            } else {
                let t = fl(prec, 2 * k) + &s;
                let num = fl(prec, 4 * k)
                    * (fl(prec, k) + &alpha)
                    * (fl(prec, k) + &beta)
                    * (fl(prec, k) + &s);
                let den = t.clone().square() * (t.clone() + 1u32) * (t - 1u32);
                (num / den).sqrt()
            };
            (a, b)
        }
    }
}

/// Total mass `int omega dx` of the family weight.
pub(crate) fn weight_mass_ext(family: &Family, prec: u32) -> Float {
    match family.kind() {
        FamilyKind::Hermite => fl(prec, rug::float::Constant::Pi).sqrt(),
        FamilyKind::Laguerre => gamma_ext(&shifted(prec, family.alpha(), 1)),
        FamilyKind::Jacobi => {
            let (a, b) = (family.alpha(), family.beta());
            let s = fl(prec, a) + fl(prec, b);
            let mut m = fl(prec, 2);
            m.pow_assign(&Float::with_val(prec, &s + 1u32));
            m * gamma_ext(&shifted(prec, a, 1)) * gamma_ext(&shifted(prec, b, 1)) / gamma_ext(&(s + 2u32))
        }
    }
}

/// f64 evaluator for the orthonormal `p_n` of a family.
#[derive(Debug, Clone)]
pub struct Orthonormal {
    family: Family,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    p0: f64,
}

const RESCALE: f64 = 1e150;

impl Orthonormal {
    pub fn new(family: &Family, n: usize) -> Self {
        let table = recurrence_coeffs_ext(family, n, TABLE_PREC);
        let p0 = weight_mass_ext(family, TABLE_PREC).sqrt().recip().to_f64();
        Self {
            family: *family,
            n,
            a: table.iter().map(|(a, _)| a.to_f64()).collect(),
            b: table.iter().map(|(_, b)| b.to_f64()).collect(),
            p0,
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = self.p0;
        for k in 0..self.n {
            let next = ((x - self.a[k]) * cur - self.b[k] * prev) / self.b[k + 1];
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `(p_n(x), p_n'(x))`.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let (mut prev, mut cur) = (0.0, self.p0);
        let (mut dprev, mut dcur) = (0.0, 0.0);
        for k in 0..self.n {
            let next = ((x - self.a[k]) * cur - self.b[k] * prev) / self.b[k + 1];
            let dnext = (cur + (x - self.a[k]) * dcur - self.b[k] * dprev) / self.b[k + 1];
            prev = cur;
            cur = next;
            dprev = dcur;
            dcur = dnext;
        }
        (cur, dcur)
    }

    /// `ln |p_n(x)|`, rescaling the recurrence so large degrees/arguments
    /// never overflow. Returns `-inf` at an exact zero.
    pub fn ln_abs(&self, x: f64) -> f64 {
        let mut prev = 0.0;
        let mut cur = self.p0;
        let mut log_scale = 0.0;
        for k in 0..self.n {
            let next = ((x - self.a[k]) * cur - self.b[k] * prev) / self.b[k + 1];
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE {
                cur /= RESCALE;
                prev /= RESCALE;
                log_scale += RESCALE.ln();
            }
        }
        cur.abs().ln() + log_scale
    }
}

/// Extended-precision evaluator, used to refine Gauss nodes and weights.
#[derive(Debug, Clone)]
pub(crate) struct OrthonormalExt {
    a: Vec<Float>,
    b: Vec<Float>,
    p0: Float,
}

impl OrthonormalExt {
    pub(crate) fn new(family: &Family, n: usize, prec: u32) -> Self {
        let table = recurrence_coeffs_ext(family, n, prec);
        let p0 = weight_mass_ext(family, prec).sqrt().recip();
        let (a, b) = table.into_iter().unzip();
        Self { a, b, p0 }
    }

    fn prec(&self) -> u32 {
        self.p0.prec()
    }

    fn degree(&self) -> usize {
        self.a.len() - 1
    }

    /// `p_n(x)` at the top degree.
    pub(crate) fn eval(&self, x: &Float) -> Float {
        let prec = self.prec();
        let mut prev = fl(prec, 0);
        let mut cur = self.p0.clone();
        for k in 0..self.degree() {
            let mut next = Float::with_val(prec, x - &self.a[k]) * &cur;
            next -= Float::with_val(prec, &self.b[k] * &prev);
            next /= &self.b[k + 1];
            prev = cur;
            cur = next;
        }
        cur
    }

    /// `(p_n(x), p_n'(x), sum_{k<n} p_k(x)^2)`.
    pub(crate) fn eval_full(&self, x: &Float) -> (Float, Float, Float) {
        let prec = self.prec();
        let mut prev = fl(prec, 0);
        let mut cur = self.p0.clone();
        let mut dprev = fl(prec, 0);
        let mut dcur = fl(prec, 0);
        let mut squares = fl(prec, 0);
        for k in 0..self.degree() {
            squares += Float::with_val(prec, cur.square_ref());
            let shift = Float::with_val(prec, x - &self.a[k]);
            let mut next = Float::with_val(prec, &shift * &cur);
            next -= Float::with_val(prec, &self.b[k] * &prev);
            next /= &self.b[k + 1];
            let mut dnext = Float::with_val(prec, &shift * &dcur) + &cur;
            dnext -= Float::with_val(prec, &self.b[k] * &dprev);
            dnext /= &self.b[k + 1];
            prev = cur;
            cur = next;
            dprev = dcur;
            dcur = dnext;
        }
        (cur, dcur, squares)
    }
}

/// Monomial coefficients `c_0..c_n` of an orthonormal polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    family: Family,
    coeffs: Vec<Float>,
}

impl PolyCoeffs {
    pub fn new(family: Family, coeffs: Vec<Float>) -> Result<Self> {
        match coeffs.last() {
            None => Err(Error::InvalidArgument("empty coefficient vector".into())),
            Some(c) if c.is_zero() => Err(Error::InvalidArgument("leading coefficient vanishes".into())),
            Some(_) => Ok(Self { family, coeffs }),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Float] {
        &self.coeffs
    }

    pub fn prec(&self) -> u32 {
        self.coeffs[0].prec()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(Float::to_f64).collect()
    }

    /// Horner evaluation in the monomial basis (diagnostics and cross-checks).
    pub fn eval_monomial(&self, x: &Float) -> Float {
        let prec = self.prec().max(x.prec());
        let mut acc = fl(prec, 0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

/// Orthonormal monomial coefficients from the explicit formulas, accepted once
/// two working precisions agree.
pub fn orthonormal_coeffs(family: &Family, n: usize, ctx: &PrecisionContext) -> Result<PolyCoeffs> {
    let coeffs = ctx.escalate(
        "orthonormal coefficients",
        |prec| Ok(explicit_coeffs(family, n, prec)),
        |a, b| max_rel_diff(a, b),
    )?;
    PolyCoeffs::new(*family, coeffs)
}

/// Coefficients at a fixed precision, without the agreement check.
pub(crate) fn explicit_coeffs(family: &Family, n: usize, prec: u32) -> Vec<Float> {
    match family.kind() {
        FamilyKind::Hermite => hermite_coeffs(n, prec),
        FamilyKind::Laguerre => laguerre_coeffs(n, family.alpha(), prec),
        FamilyKind::Jacobi => jacobi_coeffs(n, family.alpha(), family.beta(), prec),
    }
}

/// `c_t = n! / (2^n n! sqrt(pi))^{1/2} * (-1)^{(n-t)/2} 2^t / (((n-t)/2)! t!)` for `t = n (mod 2)`.
fn hermite_coeffs(n: usize, prec: u32) -> Vec<Float> {
    let n64 = n as u64;
    let mut norm = fl(prec, 2);
    norm.pow_assign(n as u32);
    norm *= factorial(prec, n64);
    norm *= fl(prec, rug::float::Constant::Pi).sqrt();
    let prefactor = factorial(prec, n64) / norm.sqrt();
    (0..=n64)
        .map(|t| {
            if (n64 - t) % 2 == 1 {
                return fl(prec, 0);
            }
            let half = (n64 - t) / 2;
            let mut c = prefactor.clone();
            let mut two_t = fl(prec, 2);
            two_t.pow_assign(t as u32);
            c *= two_t;
            c /= factorial(prec, half);
            c /= factorial(prec, t);
            if half % 2 == 1 {
                c = -c;
            }
            c
        })
        .collect()
}

/// `x + k` formed in working precision.
fn shifted(prec: u32, x: f64, k: u64) -> Float {
    fl(prec, x) + fl(prec, k)
}

/// `c_t = (-1)^{n-t} sqrt(Gamma(n+a+1)/n!) C(n,t) / Gamma(a+t+1)`.
fn laguerre_coeffs(n: usize, alpha: f64, prec: u32) -> Vec<Float> {
    let n64 = n as u64;
    let prefactor = (gamma_ext(&shifted(prec, alpha, n64 + 1)) / factorial(prec, n64)).sqrt();
    (0..=n64)
        .map(|t| {
            let mut c = prefactor.clone() * binomial_int(prec, n64, t) / gamma_ext(&shifted(prec, alpha, t + 1));
            if (n64 - t) % 2 == 1 {
                c = -c;
            }
            c
        })
        .collect()
}

/// `c_t = K sum_{i=t}^{n} (-1)^{i-t} C(n,i) C(i,t) Gamma(s+n+i+1) / (2^i Gamma(a+i+1))` with
/// `K = sqrt(Gamma(a+n+1)(2n+s+1) / (n! 2^{s+1} Gamma(s+n+1) Gamma(b+n+1)))`, `s = a + b`.
fn jacobi_coeffs(n: usize, alpha: f64, beta: f64, prec: u32) -> Vec<Float> {
    if n == 0 {
        // the general form is 0 * Gamma(0) at alpha + beta = -1
        let mass = weight_mass_ext(&Family::jacobi(alpha, beta).expect("parameters already validated"), prec);
        return vec![mass.sqrt().recip()];
    }
    let n64 = n as u64;
    let s = fl(prec, alpha) + fl(prec, beta);
    let s_plus = |k: u64| Float::with_val(prec, &s + fl(prec, k));
    let mut two_pow = fl(prec, 2);
    two_pow.pow_assign(&s_plus(1));
    let mut k2 = gamma_ext(&shifted(prec, alpha, n64 + 1)) * s_plus(2 * n64 + 1);
    k2 /= factorial(prec, n64);
    k2 /= two_pow;
    k2 /= gamma_ext(&s_plus(n64 + 1));
    k2 /= gamma_ext(&shifted(prec, beta, n64 + 1));
    let prefactor = k2.sqrt();
    // inner terms independent of t
    let inner: Vec<Float> = (0..=n64)
        .map(|i| {
            let mut two_i = fl(prec, 2);
            two_i.pow_assign(i as u32);
            binomial_int(prec, n64, i) * gamma_ext(&s_plus(n64 + i + 1))
                / (two_i * gamma_ext(&shifted(prec, alpha, i + 1)))
        })
        .collect();
    (0..=n64)
        .map(|t| {
            let mut sum = fl(prec, 0);
            for i in t..=n64 {
                let term = Float::with_val(prec, &inner[i as usize] * binomial_int(prec, i, t));
                if (i - t) % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            sum * &prefactor
        })
        .collect()
}

/// `p_n(x)` through the recurrence of the polynomial's family.
pub fn evaluate(p: &PolyCoeffs, x: f64) -> f64 {
    Orthonormal::new(p.family(), p.degree()).eval(x)
}

/// Rakhmanov density `rho_n(x) = p_n(x)^2 omega(x)`; zero outside the support.
///
/// For Jacobi parameters in `(-1, 0)` the value at the corresponding endpoint
/// is `+inf` (integrable singularity); callers detect it with `is_finite`.
pub fn rakhmanov_density(family: &Family, n: usize, x: f64) -> f64 {
    let interval = family.interval();
    if !interval.contains(x) {
        return 0.0;
    }
    let poly = Orthonormal::new(family, n);
    density_at(&poly, x, x - interval.lower, interval.upper - x)
}

/// Density from a prepared evaluator, with endpoint gaps supplied by the caller.
pub(crate) fn density_at(poly: &Orthonormal, x: f64, from_lower: f64, from_upper: f64) -> f64 {
    let ln_p = poly.ln_abs(x);
    if ln_p == f64::NEG_INFINITY {
        return 0.0;
    }
    let ln_w = poly.family().ln_weight_gaps(x, from_lower, from_upper);
    (2.0 * ln_p + ln_w).exp()
}

/// The `n` zeros of `p_n`, increasing, from the eigenvalues of the Jacobi
/// matrix followed by a Newton polish.
pub fn zeros(family: &Family, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("p_0 has no zeros; n must be >= 1".into()));
    }
    let table = recurrence_coeffs(family, n);
    let mut nodes = tridiagonal_eigenvalues(&table, n)
        .ok_or_else(|| Error::EigenSolve(format!("zeros of degree {n} for {family}")))?;
    let poly = Orthonormal::new(family, n);
    polish_roots(&poly, &mut nodes);
    Ok(nodes)
}

/// Sorted eigenvalues of the `m x m` Jacobi matrix built from `table`.
pub(crate) fn tridiagonal_eigenvalues(table: &[(f64, f64)], m: usize) -> Option<Vec<f64>> {
    let mut mat = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        mat[(k, k)] = table[k].0;
        if k + 1 < m {
            mat[(k, k + 1)] = table[k + 1].1;
            mat[(k + 1, k)] = table[k + 1].1;
        }
    }
    let eig = SymmetricEigen::try_new(mat, f64::EPSILON, 10_000)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Some(values)
}

fn polish_roots(poly: &Orthonormal, roots: &mut [f64]) {
    let m = roots.len();
    for i in 0..m {
        let gap = {
            let left = if i > 0 { roots[i] - roots[i - 1] } else { f64::INFINITY };
            let right = if i + 1 < m { roots[i + 1] - roots[i] } else { f64::INFINITY };
            left.min(right)
        };
        let mut x = roots[i];
        for _ in 0..3 {
            let (p, dp) = poly.eval_with_derivative(x);
            if p == 0.0 || dp == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() || step.abs() > 0.1 * gap {
                break;
            }
            x -= step;
            if step.abs() <= f64::EPSILON * x.abs() {
                break;
            }
        }
        roots[i] = x;
    }
}
