//! Gauss rules for classical weights with shifted parameters and rescaled
//! arguments, built by Golub-Welsch and refined in extended precision.

use rug::ops::PowAssign;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, Interval};
use crate::orthopoly::{recurrence_coeffs, tridiagonal_eigenvalues, OrthonormalExt};
use crate::precision::{fl, max_rel_diff, PrecisionContext};
use crate::special::{gamma, gamma_ext, jacobi_weight_moment, jacobi_weight_moment_ext};

/// A classical weight, possibly with non-integer shifted parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightSpec {
    /// `exp(-scale x^2)` on the real line.
    Gaussian { scale: f64 },
    /// `x^alpha exp(-rate x)` on `[0, inf)`.
    Laguerre { alpha: f64, rate: f64 },
    /// `(1-x)^alpha (1+x)^beta` on `[-1, 1]`.
    Jacobi { alpha: f64, beta: f64 },
}

impl WeightSpec {
    /// The weight `omega` of a family.
    pub fn of_family(family: &Family) -> Self {
        Self::power_of_family(family, 1.0)
    }

    /// `omega^q` written as a classical weight.
    pub fn power_of_family(family: &Family, q: f64) -> Self {
        match family.kind() {
            crate::FamilyKind::Hermite => WeightSpec::Gaussian { scale: q },
            crate::FamilyKind::Laguerre => WeightSpec::Laguerre {
                alpha: family.alpha() * q,
                rate: q,
            },
            crate::FamilyKind::Jacobi => WeightSpec::Jacobi {
                alpha: family.alpha() * q,
                beta: family.beta() * q,
            },
        }
    }

    pub fn support(&self) -> Interval {
        match self {
            WeightSpec::Gaussian { .. } => Interval::REAL_LINE,
            WeightSpec::Laguerre { .. } => Interval::HALF_LINE,
            WeightSpec::Jacobi { .. } => Interval::UNIT,
        }
    }

    /// Unscaled family whose rule is mapped onto this weight.
    fn base_family(&self) -> Result<Family> {
        let inadmissible = |what: String| Err(Error::Divergent(format!("weight {self:?}: {what}")));
        match *self {
            WeightSpec::Gaussian { scale } if !(scale > 0.0 && scale.is_finite()) => {
                inadmissible(format!("scale {scale} must be positive"))
            }
            WeightSpec::Gaussian { .. } => Ok(Family::hermite()),
            WeightSpec::Laguerre { rate, .. } if !(rate > 0.0 && rate.is_finite()) => {
                inadmissible(format!("rate {rate} must be positive"))
            }
            WeightSpec::Laguerre { alpha, .. } => {
                Family::laguerre(alpha).or_else(|_| inadmissible(format!("alpha = {alpha} <= -1")))
            }
            WeightSpec::Jacobi { alpha, beta } => Family::jacobi(alpha, beta)
                .or_else(|_| inadmissible(format!("parameters ({alpha}, {beta}) not > -1"))),
        }
    }

    /// Closed-form moment `int x^k w(x) dx`.
    pub fn moment(&self, k: u32, prec: u32) -> Result<Float> {
        self.base_family()?;
        match *self {
            WeightSpec::Gaussian { scale } => {
                if k % 2 == 1 {
                    return Ok(fl(prec, 0));
                }
                // Gamma(j + 1/2) / scale^{j + 1/2}, k = 2j
                let e = f64::from(k) / 2.0 + 0.5;
                let mut s = fl(prec, scale);
                s.pow_assign(&fl(prec, e));
                Ok(gamma(prec, e) / s)
            }
            WeightSpec::Laguerre { alpha, rate } => Ok(laguerre_moment(fl(prec, alpha), rate, k)),
            WeightSpec::Jacobi { alpha, beta } => jacobi_weight_moment(k, alpha, beta, prec),
        }
    }

    /// `int x^k omega^q dx` for the weight of `family`. Unlike
    /// `power_of_family(family, q).moment(k, prec)`, the exponents `alpha q` and
    /// `beta q` are not rounded to f64, which matters once the moments enter a
    /// cancelling sum.
    pub fn power_moment(family: &Family, q: f64, k: u32, prec: u32) -> Result<Float> {
        let weight = Self::power_of_family(family, q);
        weight.base_family()?;
        let scaled = |v: f64| fl(prec, v) * fl(prec, q);
        match family.kind() {
            crate::FamilyKind::Hermite => weight.moment(k, prec),
            crate::FamilyKind::Laguerre => Ok(laguerre_moment(scaled(family.alpha()), q, k)),
            crate::FamilyKind::Jacobi => jacobi_weight_moment_ext(k, &scaled(family.alpha()), &scaled(family.beta())),
        }
    }
}

/// `Gamma(alpha + k + 1) / rate^{alpha + k + 1}`.
fn laguerre_moment(alpha: Float, rate: f64, k: u32) -> Float {
    let prec = alpha.prec();
    let e = alpha + (k + 1);
    let mut r = fl(prec, rate);
    r.pow_assign(&e);
    gamma_ext(&e) / r
}

/// Nodes and positive weights with `int f w = sum w_i f(x_i)` exact for
/// polynomials of degree `<= exact_degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    weight: WeightSpec,
    nodes: Vec<Float>,
    weights: Vec<Float>,
    exact_degree: usize,
}

impl QuadratureRule {
    pub fn weight_spec(&self) -> WeightSpec {
        self.weight
    }

    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    pub fn weights(&self) -> &[Float] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn exact_degree(&self) -> usize {
        self.exact_degree
    }

    pub fn prec(&self) -> u32 {
        self.nodes[0].prec()
    }

    pub fn nodes_f64(&self) -> Vec<f64> {
        self.nodes.iter().map(Float::to_f64).collect()
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(Float::to_f64).collect()
    }

    /// `sum_i w_i f(x_i)` in the rule's precision.
    pub fn integrate<F: FnMut(&Float) -> Float>(&self, mut f: F) -> Float {
        let mut acc = fl(self.prec(), 0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x) * w;
        }
        acc
    }
}

/// `m`-point Gauss rule, accepted when two working precisions agree.
pub fn gauss_rule(weight: WeightSpec, m: usize, ctx: &PrecisionContext) -> Result<QuadratureRule> {
    let (nodes, weights) = ctx.escalate(
        "gauss rule",
        |prec| gauss_rule_at(weight, m, prec).map(|r| (r.nodes, r.weights)),
        |a, b| max_rel_diff(&a.0, &b.0).max(max_rel_diff(&a.1, &b.1)),
    )?;
    Ok(QuadratureRule {
        weight,
        nodes,
        weights,
        exact_degree: 2 * m - 1,
    })
}

/// `m`-point Gauss rule at a fixed precision.
pub fn gauss_rule_at(weight: WeightSpec, m: usize, prec: u32) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::InvalidArgument("a Gauss rule needs m >= 1 nodes".into()));
    }
    let family = weight.base_family()?;
    let table = recurrence_coeffs(&family, m);
    let guesses = tridiagonal_eigenvalues(&table, m)
        .ok_or_else(|| Error::EigenSolve(format!("{m}-point rule for {weight:?}")))?;
    let poly = OrthonormalExt::new(&family, m, prec);
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for guess in guesses {
        let (x, christoffel) = refine_node(&poly, guess, prec)?;
        weights.push(christoffel.recip());
        nodes.push(x);
    }
    scale_rule(weight, &mut nodes, &mut weights);
    Ok(QuadratureRule {
        weight,
        nodes,
        weights,
        exact_degree: 2 * m - 1,
    })
}

/// Newton on `p_m` from an f64 eigenvalue; returns the node and
/// `sum_{k<m} p_k(x)^2` (the inverse Christoffel weight).
fn refine_node(poly: &OrthonormalExt, guess: f64, prec: u32) -> Result<(Float, Float)> {
    const MAX_NEWTON: usize = 24;
    let mut x = fl(prec, guess);
    let scale = guess.abs().max(1e-3);
    let threshold = scale * 2f64.powi(-(prec as i32) + 4);
    // rounding in p_m can stall Newton above `threshold`; a stalled step this
    // small is accepted and the precision escalation checks the outcome
    let floor = scale * 2f64.powi(-(prec as i32) / 2);
    let mut previous = f64::INFINITY;
    for _ in 0..MAX_NEWTON {
        let (p, dp, _) = poly.eval_full(&x);
        if dp.is_zero() {
            break;
        }
        let step = p / dp;
        let size = step.clone().abs().to_f64();
        x -= step;
        let stalled = size <= floor && size > 0.5 * previous;
        if size <= threshold || stalled {
            let (_, _, squares) = poly.eval_full(&x);
            return Ok((x, squares));
        }
        previous = size;
    }
    Err(Error::EigenSolve(format!(
        "Newton refinement of node near {guess} did not converge at {prec} bits"
    )))
}

fn scale_rule(weight: WeightSpec, nodes: &mut [Float], weights: &mut [Float]) {
    match weight {
        WeightSpec::Gaussian { scale } => {
            if scale == 1.0 {
                return;
            }
            let s = fl(nodes[0].prec(), scale).sqrt();
            for (x, w) in nodes.iter_mut().zip(weights.iter_mut()) {
                *x /= &s;
                *w /= &s;
            }
        }
        WeightSpec::Laguerre { alpha, rate } => {
            if rate == 1.0 {
                return;
            }
            let prec = nodes[0].prec();
            let r = fl(prec, rate);
            let mut r_pow = r.clone();
            r_pow.pow_assign(&(fl(prec, alpha) + 1u32));
            for (x, w) in nodes.iter_mut().zip(weights.iter_mut()) {
                *x /= &r;
                *w /= &r_pow;
            }
        }
        WeightSpec::Jacobi { .. } => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn one_point_rules() {
        let r = gauss_rule(WeightSpec::Gaussian { scale: 1.0 }, 1, &ctx()).unwrap();
        assert_eq!(r.nodes_f64(), vec![0.0]);
        assert!((r.weights_f64()[0] - PI.sqrt()).abs() < 1e-15);
        let r = gauss_rule(WeightSpec::Laguerre { alpha: 0.0, rate: 1.0 }, 1, &ctx()).unwrap();
        assert!((r.nodes_f64()[0] - 1.0).abs() < 1e-15);
        assert!((r.weights_f64()[0] - 1.0).abs() < 1e-15);
        let r = gauss_rule(WeightSpec::Jacobi { alpha: 0.0, beta: 0.0 }, 1, &ctx()).unwrap();
        assert_eq!(r.nodes_f64(), vec![0.0]);
        assert!((r.weights_f64()[0] - 2.0).abs() < 1e-15);
        assert_eq!(r.exact_degree(), 1);
    }

    #[test]
    fn rejects_inadmissible_weights() {
        assert!(gauss_rule(WeightSpec::Laguerre { alpha: -1.0, rate: 1.0 }, 3, &ctx()).is_err());
        assert!(gauss_rule(WeightSpec::Jacobi { alpha: 0.0, beta: -1.5 }, 3, &ctx()).is_err());
        assert!(gauss_rule(WeightSpec::Gaussian { scale: 0.0 }, 3, &ctx()).is_err());
        assert!(gauss_rule(WeightSpec::Gaussian { scale: 1.0 }, 0, &ctx()).is_err());
    }

    #[test]
    fn legendre_two_point() {
        let r = gauss_rule(WeightSpec::Jacobi { alpha: 0.0, beta: 0.0 }, 2, &ctx()).unwrap();
        let x = r.nodes_f64();
        assert!((x[1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((x[0] + x[1]).abs() < 1e-15);
        assert!(r.weights_f64().iter().all(|w| (w - 1.0).abs() < 1e-15));
    }
}
