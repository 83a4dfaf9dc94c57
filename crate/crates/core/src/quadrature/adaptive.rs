//! Adaptive tanh-sinh integration for integrands with logarithmic (or weak
//! algebraic) singularities at known points.
//!
//! The interval is cut at the split points; each finite panel gets a
//! tanh-sinh rule, and infinite tails are first mapped to `[0, 1)` through
//! `x = a + L s / (1 - s)`. Levels halve the step until consecutive levels
//! agree; panels that still miss the target are bisected, worst first.
//!
//! The integrand receives the abscissa together with its distances to both
//! ends of the integration interval, computed without cancellation, so
//! factors like `ln(1 - x)` stay accurate next to an endpoint.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::Interval;
use crate::precision::PrecisionContext;

/// Evaluation point handed to the integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Abscissa {
    pub x: f64,
    /// `x - lower` (`inf` for an infinite lower end).
    pub from_lower: f64,
    /// `upper - x` (`inf` for an infinite upper end).
    pub from_upper: f64,
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Deepest tanh-sinh level per panel (step `2^-max_level`).
    pub max_level: u32,
    /// Panel budget for bisection.
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_level: 8,
            max_panels: 4000,
        }
    }
}

impl AdaptiveOptions {
    pub fn from_context(ctx: &PrecisionContext) -> Self {
        Self {
            rel_tol: ctx.rel_tol(),
            ..Self::default()
        }
    }

    pub fn with_abs_tol(self, abs_tol: f64) -> Self {
        Self { abs_tol, ..self }
    }

    pub fn with_max_level(self, max_level: u32) -> Self {
        Self { max_level, ..self }
    }

    pub fn with_max_panels(self, max_panels: usize) -> Self {
        Self { max_panels, ..self }
    }
}

/// Split points closer than this (relative to `max(1, |x|)`) are merged.
pub const SPLIT_MERGE_TOL: f64 = 1e-12;

/// Tails are summed to at least `T_MIN` and extended up to `T_MAX` while the
/// outermost node still carries more than `TAIL_TOL` of the running sum; strong
/// endpoint singularities `x^a`, `a` near -1, decay only like `exp(-(1+a) e^t)`.
const T_MIN: f64 = 4.0;
const T_MAX: f64 = 7.0;
const TAIL_TOL: f64 = 1e-18;
const MIN_LEVEL: u32 = 3;
const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// Integrates `f` over `interval` with the given singular split points,
/// using tolerances from `ctx`.
pub fn integrate_log_singular<F>(f: F, interval: Interval, split_points: &[f64], ctx: &PrecisionContext) -> Result<Integral>
where
    F: Fn(Abscissa) -> f64,
{
    integrate_adaptive(f, interval, split_points, &AdaptiveOptions::from_context(ctx))
}

/// As [`integrate_log_singular`] with explicit options.
pub fn integrate_adaptive<F>(f: F, interval: Interval, split_points: &[f64], opts: &AdaptiveOptions) -> Result<Integral>
where
    F: Fn(Abscissa) -> f64,
{
    let (lo, hi) = (interval.lower, interval.upper);
    let mut splits = merged_splits(split_points, interval);
    if splits.is_empty() && !lo.is_finite() && !hi.is_finite() {
        splits.push(0.0);
    }
    let mut breaks = Vec::with_capacity(splits.len() + 2);
    breaks.push(lo);
    breaks.extend_from_slice(&splits);
    breaks.push(hi);

    let mut panels = Vec::new();
    let last = breaks.len() - 2;
    for i in 0..=last {
        let (a, b) = (breaks[i], breaks[i + 1]);
        let map = if a.is_finite() && b.is_finite() {
            Map::Finite
        } else if a.is_finite() {
            let len = if i > 0 && breaks[i - 1].is_finite() { a - breaks[i - 1] } else { 1.0 };
            Map::Upper { a, len }
        } else {
            let len = if i < last && breaks[i + 2].is_finite() { breaks[i + 2] - b } else { 1.0 };
            Map::Lower { b, len }
        };
        let (c, d) = match map {
            Map::Finite => (a, b),
            _ => (0.0, 1.0),
        };
        panels.push(Panel { c, d, map });
    }

    let share = opts.abs_tol / panels.len() as f64;
    let ctx = PanelCtx { f: &f, lo, hi, opts };
    let mut done: Vec<(Panel, Estimate)> = Vec::with_capacity(panels.len());
    for p in panels {
        let est = ctx.integrate(&p, share)?;
        done.push((p, est));
    }

    loop {
        let value: f64 = done.iter().map(|(_, e)| e.value).sum();
        let error: f64 = done.iter().map(|(_, e)| e.error).sum();
        let evaluations = done.iter().map(|(_, e)| e.evals).sum();
        if error <= opts.rel_tol * value.abs() + opts.abs_tol {
            return Ok(Integral {
                value,
                error,
                evaluations,
                panels: done.len(),
            });
        }
        if done.len() >= opts.max_panels {
            return Err(Error::Integration(format!(
                "estimated error {error:e} above target after {} panels",
                done.len()
            )));
        }
        let worst = done
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .1.error.total_cmp(&b.1 .1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let (p, _) = done.swap_remove(worst);
        let mid = 0.5 * (p.c + p.d);
        if !(mid > p.c && mid < p.d) {
            return Err(Error::Integration(format!(
                "panel [{}, {}] cannot be bisected further",
                p.c, p.d
            )));
        }
        for half in [Panel { d: mid, ..p }, Panel { c: mid, ..p }] {
            let est = ctx.integrate(&half, share / 2.0)?;
            done.push((half, est));
        }
    }
}

/// Sorted split points strictly inside `interval`, near-duplicates merged.
fn merged_splits(points: &[f64], interval: Interval) -> Vec<f64> {
    let mut pts: Vec<f64> = points.iter().copied().filter(|&x| interval.contains_open(x)).collect();
    pts.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    for x in pts {
        match out.last() {
            Some(&prev) if (x - prev).abs() <= SPLIT_MERGE_TOL * prev.abs().max(1.0) => {}
            _ => out.push(x),
        }
    }
    out.retain(|&x| {
        let near = |e: f64| e.is_finite() && (x - e).abs() <= SPLIT_MERGE_TOL * e.abs().max(1.0);
        !near(interval.lower) && !near(interval.upper)
    });
    out
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Finite,
    /// `x = a + len s / (1 - s)`, `s in [0, 1)`.
    Upper { a: f64, len: f64 },
    /// `x = b - len s / (1 - s)`.
    Lower { b: f64, len: f64 },
}

/// Panel `[c, d]` in the mapped coordinate.
#[derive(Debug, Clone, Copy)]
struct Panel {
    c: f64,
    d: f64,
    map: Map,
}

#[derive(Debug, Clone, Copy)]
struct Estimate {
    value: f64,
    error: f64,
    evals: usize,
}

struct PanelCtx<'a, F> {
    f: &'a F,
    lo: f64,
    hi: f64,
    opts: &'a AdaptiveOptions,
}

impl<F: Fn(Abscissa) -> f64> PanelCtx<'_, F> {
    /// Integrand times Jacobian at a mapped point given by its gaps to `c`, `d`.
    fn mapped(&self, p: &Panel, gap_c: f64, gap_d: f64) -> (f64, f64) {
        let s = if gap_c <= gap_d { p.c + gap_c } else { p.d - gap_d };
        match p.map {
            Map::Finite => {
                let at = Abscissa {
                    x: s,
                    from_lower: (p.c - self.lo) + gap_c,
                    from_upper: (self.hi - p.d) + gap_d,
                };
                ((self.f)(at), 1.0)
            }
            Map::Upper { a, len } => {
                let one_minus = (1.0 - p.d) + gap_d;
                let t = len * s / one_minus;
                let at = Abscissa {
                    x: a + t,
                    from_lower: (a - self.lo) + t,
                    from_upper: f64::INFINITY,
                };
                ((self.f)(at), len / (one_minus * one_minus))
            }
            Map::Lower { b, len } => {
                let one_minus = (1.0 - p.d) + gap_d;
                let t = len * s / one_minus;
                let at = Abscissa {
                    x: b - t,
                    from_lower: f64::INFINITY,
                    from_upper: (self.hi - b) + t,
                };
                ((self.f)(at), len / (one_minus * one_minus))
            }
        }
    }

    /// Contribution `w * g(t)` of tanh-sinh node `t`, without the step factor.
    fn node(&self, p: &Panel, t: f64) -> Result<f64> {
        let width = p.d - p.c;
        let u = FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        let w = 0.5 * width * FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        let gap_c = width / (1.0 + (-2.0 * u).exp());
        let gap_d = width / (1.0 + (2.0 * u).exp());
        if w == 0.0 || gap_c == 0.0 || gap_d == 0.0 {
            return Ok(0.0);
        }
        let (g, jac) = self.mapped(p, gap_c, gap_d);
        let v = g * jac * w;
        if v.is_finite() {
            Ok(v)
        } else if w < 1e-250 || !jac.is_finite() {
            Ok(0.0)
        } else {
            Err(Error::Integration(format!(
                "integrand is not finite inside panel [{}, {}] (value {g})",
                p.c, p.d
            )))
        }
    }

    /// Level-0 sum over one tail; returns the sum, the evaluations and the reach.
    fn tail(&self, p: &Panel, sign: f64, scale: f64) -> Result<(f64, usize, f64)> {
        let (mut sum, mut evals, mut k) = (0.0, 0usize, 1.0);
        loop {
            let v = self.node(p, sign * k)?;
            sum += v;
            evals += 1;
            if k >= T_MAX || (k >= T_MIN && v.abs() <= TAIL_TOL * (scale + sum.abs())) {
                return Ok((sum, evals, k));
            }
            k += 1.0;
        }
    }

    fn integrate(&self, p: &Panel, abs_share: f64) -> Result<Estimate> {
        let center = self.node(p, 0.0)?;
        let (right, right_evals, right_reach) = self.tail(p, 1.0, center.abs())?;
        let (left, left_evals, left_reach) = self.tail(p, -1.0, (center + right).abs())?;
        let mut sum = center + right + left;
        let mut evals = 1 + right_evals + left_evals;
        let mut h = 1.0;
        let mut value = sum * h;
        let mut error = f64::INFINITY;
        for level in 1..=self.opts.max_level {
            h *= 0.5;
            let mut t = h;
            while t <= right_reach.max(left_reach) {
                if t <= right_reach {
                    sum += self.node(p, t)?;
                    evals += 1;
                }
                if t <= left_reach {
                    sum += self.node(p, -t)?;
                    evals += 1;
                }
                t += 2.0 * h;
            }
            let next = sum * h;
            error = (next - value).abs();
            value = next;
            if level >= MIN_LEVEL && error <= (self.opts.rel_tol * value.abs()).max(abs_share) {
                break;
            }
        }
        Ok(Estimate { value, error, evals })
    }
}
