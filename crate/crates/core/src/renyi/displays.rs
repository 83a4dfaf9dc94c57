//! Printed Onicescu-length special cases, kept as fixtures and compared with
//! the general routes rather than used for computation.
//!
//! * Laguerre `n = 0, 1` carry an outer exponent `1/2` that contradicts
//!   `L_2 = (int rho^2)^{-1}`: at `alpha = 0, n = 1` the display gives 2 while
//!   the density gives 4. [`laguerre_onicescu_corrected`] drops the exponent.
//! * Jacobi `n = 0` keeps a free `q` inside an `L_2` expression; read as `q = 2`.
//! * Jacobi `n = 1` prints `C(4, n)` inside a sum over `k`; read as `C(4, k)`.

use rug::ops::PowAssign;
use serde::Serialize;

use crate::error::Result;
use crate::family::Family;
use crate::orthopoly::explicit_coeffs;
use crate::precision::{fl, PrecisionContext};
use crate::quadrature::integrate_density_power;
use crate::special::{binomial_int, gamma, gamma_f64, jacobi_weight_moment};

use super::{length_from_functional, RenyiOrder};

const PREC: u32 = 256;

/// Laguerre `L_2` for `n = 0, 1` exactly as printed (including the `1/2` exponent).
pub fn laguerre_onicescu_display(n: usize, alpha: f64) -> Option<f64> {
    laguerre_onicescu_corrected(n, alpha).map(f64::sqrt)
}

/// The same displays without the outer square root.
pub fn laguerre_onicescu_corrected(n: usize, alpha: f64) -> Option<f64> {
    let g = gamma_f64;
    let base = 2f64.powf(2.0 * alpha + 1.0) / g(2.0 * alpha + 1.0);
    match n {
        0 => Some(base * g(alpha + 1.0).powi(2)),
        1 => Some(4.0 * base * g(alpha + 2.0).powi(2) / ((1.0 + alpha) * (2.0 + 3.0 * alpha))),
        _ => None,
    }
}

/// Jacobi `n = 0` display with `q = 2`.
pub fn jacobi_onicescu_n0_display(alpha: f64, beta: f64) -> f64 {
    let q = 2.0;
    let mut two_s = fl(PREC, 2);
    two_s.pow_assign(&fl(PREC, alpha + beta + 1.0));
    let mut norm_q = gamma(PREC, alpha + beta + 2.0) / (two_s * gamma(PREC, alpha + 1.0) * gamma(PREC, beta + 1.0));
    norm_q.pow_assign(&fl(PREC, q));
    let mut two = fl(PREC, 2);
    two.pow_assign(&fl(PREC, 1.0 + 2.0 * alpha + 2.0 * beta));
    let kernel = two * gamma(PREC, 2.0 * alpha + 1.0) * gamma(PREC, 2.0 * beta + 1.0)
        / gamma(PREC, 2.0 * alpha + 2.0 * beta + 2.0);
    (norm_q * kernel).recip().to_f64()
}

/// Jacobi `n = 1` display `[sum_k C(4, k) c_0^{4-k} c_1^k I(k, 2, alpha, beta)]^{-1}`.
pub fn jacobi_onicescu_n1_display(alpha: f64, beta: f64) -> Result<f64> {
    let c = explicit_coeffs(&Family::jacobi(alpha, beta)?, 1, PREC);
    let mut acc = fl(PREC, 0);
    for k in 0..=4u32 {
        let mut c0 = c[0].clone();
        c0.pow_assign(4 - k);
        let mut c1 = c[1].clone();
        c1.pow_assign(k);
        acc += binomial_int(PREC, 4, u64::from(k)) * c0 * c1 * jacobi_weight_moment(k, 2.0 * alpha, 2.0 * beta, PREC)?;
    }
    Ok(acc.recip().to_f64())
}

/// One row of the display-versus-oracle table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisplayCheck {
    pub display: &'static str,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub printed: f64,
    pub oracle: f64,
    pub rel_deviation: f64,
    pub consistent: bool,
}

fn check(display: &'static str, alpha: f64, beta: Option<f64>, printed: f64, oracle: f64, tol: f64) -> DisplayCheck {
    let rel_deviation = ((printed - oracle) / oracle).abs();
    DisplayCheck {
        display,
        alpha,
        beta,
        printed,
        oracle,
        rel_deviation,
        consistent: rel_deviation <= tol,
    }
}

/// Compares every printed Onicescu special case with the quadrature oracle.
pub fn erratum_table(alphas: &[f64], ctx: &PrecisionContext) -> Result<Vec<DisplayCheck>> {
    let q = RenyiOrder::integer(2)?;
    let tol = 1e-10;
    let oracle = |family: &Family, n: usize| -> Result<f64> {
        length_from_functional(integrate_density_power(family, n, q, ctx)?, q)
    };
    let mut rows = Vec::new();
    for &alpha in alphas {
        if q.check_integrable(&Family::laguerre(alpha)?).is_err() {
            continue;
        }
        let lag = Family::laguerre(alpha)?;
        for (n, printed, corrected) in [
            (0, "laguerre n=0 (printed)", "laguerre n=0 (without outer 1/2)"),
            (1, "laguerre n=1 (printed)", "laguerre n=1 (without outer 1/2)"),
        ] {
            let truth = oracle(&lag, n)?;
            let shown = laguerre_onicescu_display(n, alpha).expect("n <= 1");
            let fixed = laguerre_onicescu_corrected(n, alpha).expect("n <= 1");
            rows.push(check(printed, alpha, None, shown, truth, tol));
            rows.push(check(corrected, alpha, None, fixed, truth, tol));
        }
        for beta in alphas.iter().copied() {
            let jac = Family::jacobi(alpha, beta)?;
            if q.check_integrable(&jac).is_err() {
                continue;
            }
            rows.push(check(
                "jacobi n=0 (q read as 2)",
                alpha,
                Some(beta),
                jacobi_onicescu_n0_display(alpha, beta),
                oracle(&jac, 0)?,
                tol,
            ));
            rows.push(check(
                "jacobi n=1 (binomial read as C(4,k))",
                alpha,
                Some(beta),
                jacobi_onicescu_n1_display(alpha, beta)?,
                oracle(&jac, 1)?,
                tol,
            ));
        }
    }
    Ok(rows)
}
