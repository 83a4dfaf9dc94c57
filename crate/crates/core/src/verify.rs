//! Desk-scale invariant suites. Each check reduces a grid to its worst
//! deviation and compares it with a tolerance that callers may override by
//! check name.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Family;
use crate::orthopoly::{orthonormal_coeffs, zeros, Orthonormal};
use crate::precision::{fl, PrecisionContext};
use crate::quadrature::{
    density_moment, density_power_at, gauss_rule, integrate_abs_density_power, integrate_density_power,
    orthonormality_product, AdaptiveOptions, WeightSpec,
};
use crate::renyi::bell::power_coeffs_of;
use crate::renyi::displays::{erratum_table, DisplayCheck};
use crate::renyi::{power_functional_bell, power_functional_lauricella, RenyiOrder};
use crate::report::serialize_real;
use crate::shannon::{bound_dominance_check, shannon_inequality_check, shannon_numeric};
use crate::spreading::{cramer_rao_product, fisher_information, fisher_information_numeric, moment, stddev, ExtNonNegReal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Orthopoly,
    Quadrature,
    Spreading,
    Renyi,
    Shannon,
    Erratum,
}

impl Scope {
    pub const ALL: [Scope; 6] = [
        Scope::Orthopoly,
        Scope::Quadrature,
        Scope::Spreading,
        Scope::Renyi,
        Scope::Shannon,
        Scope::Erratum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scope::Orthopoly => "orthopoly",
            Scope::Quadrature => "quadrature",
            Scope::Spreading => "spreading",
            Scope::Renyi => "renyi",
            Scope::Shannon => "shannon",
            Scope::Erratum => "erratum",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A scope name or `all`.
pub fn parse_scopes(s: &str) -> Result<Vec<Scope>> {
    if s == "all" {
        return Ok(Scope::ALL.to_vec());
    }
    s.split(',').map(|t| t.trim().parse()).collect()
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scope::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scope {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub scope: Scope,
    pub name: &'static str,
    /// Worst deviation over the grid (relative unless the name says otherwise).
    #[serde(serialize_with = "serialize_real")]
    pub deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Grid point of the worst deviation, or the failure message.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub erratum: Vec<DisplayCheck>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyOptions {
    /// Tolerance overrides keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
}

/// Worst deviation seen so far and where.
struct Worst {
    deviation: f64,
    detail: String,
}

impl Worst {
    fn new() -> Self {
        Self { deviation: 0.0, detail: String::new() }
    }

    fn see(&mut self, deviation: f64, at: impl FnOnce() -> String) {
        // NaN counts as the worst possible outcome
        if !(deviation <= self.deviation) {
            self.deviation = deviation;
            self.detail = at();
        }
    }
}

struct Suite<'a> {
    opts: &'a VerifyOptions,
    checks: Vec<Check>,
}

impl Suite<'_> {
    fn run<F>(&mut self, scope: Scope, name: &'static str, default_tol: f64, body: F)
    where
        F: FnOnce(&mut Worst) -> Result<()>,
    {
        let tolerance = self.opts.tolerances.get(name).copied().unwrap_or(default_tol);
        let mut worst = Worst::new();
        let check = match body(&mut worst) {
            Ok(()) => Check {
                scope,
                name,
                deviation: worst.deviation,
                tolerance,
                passed: worst.deviation <= tolerance,
                detail: worst.detail,
            },
            Err(e) => Check {
                scope,
                name,
                deviation: f64::NAN,
                tolerance,
                passed: false,
                detail: e.to_string(),
            },
        };
        self.checks.push(check);
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

const GRID: [f64; 5] = [-0.5, 0.0, 0.5, 2.0, 5.0];

fn grid_families() -> Vec<Family> {
    let mut v = vec![Family::hermite()];
    for &a in &GRID {
        v.push(Family::laguerre(a).expect("grid is admissible"));
    }
    for &a in &GRID {
        for &b in &GRID {
            v.push(Family::jacobi(a, b).expect("grid is admissible"));
        }
    }
    v
}

fn sample_families() -> Vec<Family> {
    vec![
        Family::hermite(),
        Family::laguerre(-0.5).unwrap(),
        Family::laguerre(2.0).unwrap(),
        Family::jacobi(0.0, 0.0).unwrap(),
        Family::jacobi(-0.5, 2.0).unwrap(),
        Family::jacobi(5.0, 0.5).unwrap(),
        Family::jacobi(-0.5, -0.5).unwrap(),
    ]
}

pub fn run(scopes: &[Scope], opts: &VerifyOptions, ctx: &PrecisionContext) -> VerifyReport {
    let mut suite = Suite { opts, checks: Vec::new() };
    let mut erratum = Vec::new();
    for &scope in scopes {
        match scope {
            Scope::Orthopoly => orthopoly_checks(&mut suite, ctx),
            Scope::Quadrature => quadrature_checks(&mut suite, ctx),
            Scope::Spreading => spreading_checks(&mut suite, ctx),
            Scope::Renyi => renyi_checks(&mut suite, ctx),
            Scope::Shannon => shannon_checks(&mut suite, ctx),
            Scope::Erratum => erratum_checks(&mut suite, ctx, &mut erratum),
        }
    }
    VerifyReport {
        passed: suite.checks.iter().all(|c| c.passed),
        checks: suite.checks,
        erratum,
    }
}

fn orthopoly_checks(suite: &mut Suite<'_>, ctx: &PrecisionContext) {
    suite.run(Scope::Orthopoly, "orthonormality_abs", 1e-12, |w| {
        for fam in sample_families() {
            for n in (0..=30).step_by(3) {
                for m in (n..=30).step_by(4) {
                    let v = orthonormality_product(&fam, n, m, ctx.bits())?.to_f64();
                    let target = if n == m { 1.0 } else { 0.0 };
                    w.see((v - target).abs(), || format!("{fam} n={n} m={m}"));
                }
            }
        }
        Ok(())
    });
    suite.run(Scope::Orthopoly, "density_normalization_abs", 1e-10, |w| {
        let q = RenyiOrder::integer(1)?;
        for fam in sample_families() {
            for n in [0, 1, 7, 30] {
                // adaptive quadrature of rho itself, independent of the Gauss rules
                let v = integrate_abs_density_power(&fam, n, q, ctx)?.value;
                w.see((v - 1.0).abs(), || format!("{fam} n={n}"));
            }
        }
        Ok(())
    });
    suite.run(Scope::Orthopoly, "coefficients_vs_recurrence", 1e-10, |w| {
        for fam in sample_families() {
            let poly_n = [2, 6, 12];
            for n in poly_n {
                let c = orthonormal_coeffs(&fam, n, ctx)?;
                let rec = Orthonormal::new(&fam, n);
                let (lo, hi) = match (fam.interval().lower.is_finite(), fam.interval().upper.is_finite()) {
                    (true, true) => (-1.0, 1.0),
                    (true, false) => (0.0, 4.0 * n as f64 + 6.0),
                    _ => (-(2.0 * n as f64 + 2.0).sqrt(), (2.0 * n as f64 + 2.0).sqrt()),
                };
                let scale = (0..=100)
                    .map(|i| rec.eval(lo + (hi - lo) * i as f64 / 100.0).abs())
                    .fold(0.0f64, f64::max);
                for i in 0..100 {
                    let x = lo + (hi - lo) * (i as f64 + 0.5) / 100.0;
                    let a = c.eval_monomial(&fl(ctx.bits(), x)).to_f64();
                    let b = rec.eval(x);
                    // relative to the polynomial's size on the interval: pointwise
                    // relative error is meaningless next to a zero
                    w.see((a - b).abs() / scale, || format!("{fam} n={n} x={x}"));
                }
            }
        }
        Ok(())
    });
    suite.run(Scope::Orthopoly, "zeros_interlace_violations", 0.0, |w| {
        for fam in sample_families() {
            for n in 1..=20 {
                let a = zeros(&fam, n)?;
                let b = zeros(&fam, n + 1)?;
                let ok = a.iter().enumerate().all(|(i, &z)| b[i] < z && z < b[i + 1]);
                w.see(if ok { 0.0 } else { 1.0 }, || format!("{fam} n={n}"));
            }
        }
        Ok(())
    });
}

fn quadrature_checks(suite: &mut Suite<'_>, ctx: &PrecisionContext) {
    suite.run(Scope::Quadrature, "rule_exactness", 1e-13, |w| {
        let weights = [
            WeightSpec::Gaussian { scale: 1.0 },
            WeightSpec::Gaussian { scale: 2.5 },
            WeightSpec::Laguerre { alpha: -0.25, rate: 3.0 },
            WeightSpec::Laguerre { alpha: 7.5, rate: 1.0 },
            WeightSpec::Jacobi { alpha: -0.5, beta: 1.5 },
            WeightSpec::Jacobi { alpha: 10.0, beta: 4.0 },
        ];
        for weight in weights {
            for m in [1, 4, 12] {
                let rule = gauss_rule(weight, m, ctx)?;
                for j in 0..=rule.exact_degree() as u32 {
                    let v = rule.integrate(|x| {
                        let mut p = x.clone();
                        rug::ops::PowAssign::pow_assign(&mut p, j);
                        p
                    });
                    let exact = weight.moment(j, ctx.bits())?;
                    // odd Gaussian moments vanish: measure against the even neighbour
                    let scale = if exact.is_zero() { weight.moment(j + 1, ctx.bits())?.to_f64() } else { exact.to_f64() };
                    let d = Float::with_val(ctx.bits(), &v - &exact).to_f64().abs() / scale.abs();
                    w.see(d, || format!("{weight:?} m={m} j={j}"));
                }
            }
        }
        Ok(())
    });
    suite.run(Scope::Quadrature, "q1_normalization_abs", 1e-12, |w| {
        let q = RenyiOrder::integer(1)?;
        for fam in grid_families() {
            for n in [0, 3, 10, 30] {
                let v = integrate_density_power(&fam, n, q, ctx)?;
                w.see((v - 1.0).abs(), || format!("{fam} n={n}"));
            }
        }
        Ok(())
    });
    suite.run(Scope::Quadrature, "extra_nodes_stability", ctx.rel_tol(), |w| {
        for fam in sample_families() {
            for two_q in [2, 4, 6] {
                let q = RenyiOrder::new(two_q)?;
                if q.check_integrable(&fam).is_err() {
                    continue;
                }
                for n in [1, 5, 9] {
                    let exact = density_power_at(&fam, n, q, 0, ctx.bits())?.to_f64();
                    let m = (n * two_q as usize) / 2 + 1;
                    let doubled = density_power_at(&fam, n, q, m, ctx.bits())?.to_f64();
                    w.see(rel(doubled, exact), || format!("{fam} n={n} 2q={two_q}"));
                }
            }
        }
        Ok(())
    });
}

fn spreading_checks(suite: &mut Suite<'_>, ctx: &PrecisionContext) {
    suite.run(Scope::Spreading, "stddev_vs_quadrature", 1e-12, |w| {
        for fam in grid_families() {
            for n in [0, 1, 2, 9, 30] {
                let m1 = density_moment(&fam, n, 1, ctx)?;
                let m2 = density_moment(&fam, n, 2, ctx)?;
                w.see(rel(stddev(&fam, n), (m2 - m1 * m1).sqrt()), || format!("{fam} n={n}"));
            }
        }
        Ok(())
    });
    suite.run(Scope::Spreading, "fisher_vs_integral", 1e-8, |w| {
        let opts = AdaptiveOptions::default().with_abs_tol(1e-12);
        let finite = [
            Family::hermite(),
            Family::laguerre(0.0)?,
            Family::laguerre(2.0)?,
            Family::jacobi(0.0, 0.0)?,
            Family::jacobi(0.0, 2.0)?,
            Family::jacobi(2.0, 5.0)?,
        ];
        for fam in finite {
            for n in [0, 1, 4, 10] {
                let ExtNonNegReal::Finite(f) = fisher_information(&fam, n) else {
                    return Err(Error::Unsupported(format!("{fam} n={n}: expected a finite branch")));
                };
                let numeric = fisher_information_numeric(&fam, n, 0.0, &opts)?.value;
                let d = if f == 0.0 { numeric.abs() } else { rel(numeric, f) };
                w.see(d, || format!("{fam} n={n}"));
            }
        }
        Ok(())
    });
    suite.run(Scope::Spreading, "hermite_cramer_rao_abs", 1e-14, |w| {
        for n in 0..=30 {
            w.see((cramer_rao_product(&Family::hermite(), n) - 0.5).abs(), || format!("n={n}"));
        }
        Ok(())
    });
    suite.run(Scope::Spreading, "moments_vs_quadrature", 1e-12, |w| {
        let mut fams = vec![Family::hermite()];
        fams.extend(GRID.iter().map(|&a| Family::laguerre(a).expect("grid")));
        for fam in fams {
            for n in [0, 2, 7, 20] {
                for k in 0..=8 {
                    let closed = moment(&fam, n, k)?;
                    let oracle = density_moment(&fam, n, k, ctx)?;
                    w.see((closed - oracle).abs() / oracle.abs().max(1.0), || format!("{fam} n={n} k={k}"));
                }
            }
        }
        Ok(())
    });
}

fn renyi_checks(suite: &mut Suite<'_>, ctx: &PrecisionContext) {
    let orders = [2u32, 3, 4, 6];
    suite.run(Scope::Renyi, "bell_vs_oracle", 1e-10, |w| {
        for fam in sample_families() {
            for two_q in orders {
                let q = RenyiOrder::new(two_q)?;
                if q.check_integrable(&fam).is_err() {
                    continue;
                }
                for n in [0, 1, 3, 8] {
                    let b = power_functional_bell(&fam, n, q, ctx)?;
                    let o = integrate_density_power(&fam, n, q, ctx)?;
                    let d = if o == 0.0 { b.abs() } else { rel(b, o) };
                    w.see(d, || format!("{fam} n={n} 2q={two_q}"));
                }
            }
        }
        Ok(())
    });
    suite.run(Scope::Renyi, "lauricella_vs_bell_vs_oracle", 1e-10, |w| {
        for alpha in [0.0, 0.5, 2.0, 5.0] {
            let fam = Family::laguerre(alpha)?;
            for two_q in orders {
                let q = RenyiOrder::new(two_q)?;
                for n in [0, 1, 3, 6] {
                    let l = power_functional_lauricella(n, alpha, q, ctx)?;
                    let b = power_functional_bell(&fam, n, q, ctx)?;
                    let o = integrate_density_power(&fam, n, q, ctx)?;
                    w.see(rel(l, b).max(rel(l, o)), || format!("alpha={alpha} n={n} 2q={two_q}"));
                }
            }
        }
        Ok(())
    });
    suite.run(Scope::Renyi, "bell_q1_normalization_abs", 1e-12, |w| {
        let q = RenyiOrder::integer(1)?;
        for fam in sample_families() {
            for n in [0, 4, 8] {
                w.see((power_functional_bell(&fam, n, q, ctx)? - 1.0).abs(), || format!("{fam} n={n}"));
            }
        }
        Ok(())
    });
    suite.run(Scope::Renyi, "power_vs_convolution", ctx.rel_tol(), |w| {
        for fam in sample_families() {
            for n in 0..=6 {
                let c = orthonormal_coeffs(&fam, n, ctx)?;
                let mut direct = vec![fl(ctx.bits(), 1)];
                for power in 1..=6u32 {
                    direct = convolve(&direct, c.coeffs());
                    let via_bell = power_coeffs_of(c.coeffs(), power);
                    let scale = direct.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max);
                    for (a, b) in via_bell.iter().zip(&direct) {
                        let d = Float::with_val(ctx.bits(), a - b).to_f64().abs() / scale;
                        w.see(d, || format!("{fam} n={n} power={power}"));
                    }
                }
            }
        }
        Ok(())
    });
}

fn convolve(a: &[Float], b: &[Float]) -> Vec<Float> {
    let prec = a[0].prec().max(b[0].prec());
    let mut out = vec![fl(prec, 0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Float::with_val(prec, x * y);
        }
    }
    out
}

fn shannon_checks(suite: &mut Suite<'_>, ctx: &PrecisionContext) {
    use std::f64::consts::{E, PI};
    suite.run(Scope::Shannon, "ground_state_entropy_abs", 1e-7, |w| {
        let cases = [
            (Family::hermite(), (PI * E).sqrt()),
            (Family::laguerre(0.0)?, E),
            (Family::jacobi(0.0, 0.0)?, 2.0),
        ];
        for (fam, length) in cases {
            let s = shannon_numeric(&fam, 0, ctx)?;
            w.see((s.entropy - length.ln()).abs(), || format!("{fam}"));
        }
        Ok(())
    });
    suite.run(Scope::Shannon, "audit_violations", 0.0, |w| {
        let fams = [Family::hermite(), Family::laguerre(0.5)?, Family::laguerre(5.0)?, Family::jacobi(2.0, 2.0)?];
        for fam in fams {
            for n in [0, 1, 5, 12, 20] {
                let bound = bound_dominance_check(&fam, n, ctx)?;
                let shannon = shannon_inequality_check(&fam, n, ctx)?;
                let bad = !(bound.holds && shannon.holds);
                w.see(if bad { 1.0 } else { 0.0 }, || format!("{fam} n={n}: {bound:?} {shannon:?}"));
            }
        }
        Ok(())
    });
    suite.run(Scope::Shannon, "jacobi_reflection_abs", 1e-10, |w| {
        for (a, b) in [(2.0, 5.0), (-0.5, 0.5)] {
            for n in [1, 6] {
                let s = shannon_numeric(&Family::jacobi(a, b)?, n, ctx)?.entropy;
                let r = shannon_numeric(&Family::jacobi(b, a)?, n, ctx)?.entropy;
                w.see((s - r).abs(), || format!("({a},{b}) n={n}"));
            }
        }
        Ok(())
    });
}

fn erratum_checks(suite: &mut Suite<'_>, ctx: &PrecisionContext, rows: &mut Vec<DisplayCheck>) {
    // passes when exactly the printed Laguerre displays disagree with the oracle
    suite.run(Scope::Erratum, "display_classification", 0.0, |w| {
        let table = erratum_table(&[0.0, 0.5, 2.0, 5.0], ctx)?;
        for r in &table {
            let expect_consistent = !r.display.contains("(printed)");
            w.see(if r.consistent == expect_consistent { 0.0 } else { 1.0 }, || {
                format!("{} alpha={} beta={:?}", r.display, r.alpha, r.beta)
            });
        }
        *rows = table;
        Ok(())
    });
}
