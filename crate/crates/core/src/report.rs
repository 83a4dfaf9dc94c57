//! Per-(family, n) record of every measure, with the route each number came from.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::family::{Family, FamilyKind};
use crate::precision::PrecisionContext;
use crate::quadrature::{integrate_abs_density_power, integrate_density_power};
use crate::renyi::{length_from_functional, power_functional_bell, power_functional_lauricella, RenyiOrder};
use crate::shannon::{optimize_bound, shannon_asymptotic, shannon_numeric, Audit};
use crate::spreading::{fisher_length, stddev};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Bell,
    Lauricella,
    Oracle,
    Asymptotic,
}

/// Serializes non-finite floats as `"inf"`, `"-inf"` or `"nan"`.
pub fn serialize_real<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// A value with its provenance. `value` is `None` when the measure is
/// undefined for this density; `note` then says why.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure {
    #[serde(serialize_with = "serialize_opt_real")]
    pub value: Option<f64>,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn serialize_opt_real<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => serialize_real(x, s),
        None => s.serialize_none(),
    }
}

impl Measure {
    pub fn new(value: f64, provenance: Provenance) -> Self {
        Self { value: Some(value), provenance, note: None }
    }

    pub fn undefined(provenance: Provenance, note: impl Into<String>) -> Self {
        Self { value: None, provenance, note: Some(note.into()) }
    }

    /// Maps errors that mean "not defined here" to an undefined measure and
    /// passes every other error through.
    fn from_result(r: Result<f64>, provenance: Provenance) -> Result<Self> {
        match r {
            Ok(v) => Ok(Self::new(v, provenance)),
            Err(Error::Divergent(m)) => Ok(Self::undefined(provenance, format!("divergent: {m}"))),
            Err(e @ Error::NonPositiveFunctional { .. }) => Ok(Self::undefined(provenance, e.to_string())),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyDescriptor {
    pub kind: FamilyKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
}

impl From<&Family> for FamilyDescriptor {
    fn from(f: &Family) -> Self {
        let (alpha, beta) = match f.kind() {
            FamilyKind::Hermite => (None, None),
            FamilyKind::Laguerre => (Some(f.alpha()), None),
            FamilyKind::Jacobi => (Some(f.alpha()), Some(f.beta())),
        };
        Self { kind: f.kind(), alpha, beta }
    }
}

/// Rényi length of one order through every applicable route.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenyiEntry {
    pub order: RenyiOrder,
    pub bell: Measure,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lauricella: Option<Measure>,
    pub oracle: Measure,
    /// For odd `two_q` the routes above use the signed power `p_n^{2q}`; this
    /// is the length of the density itself, from `int rho_n^q dx`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub absolute: Option<Measure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShannonEntry {
    pub numeric: Measure,
    #[serde(serialize_with = "serialize_opt_real")]
    pub est_error: Option<f64>,
    pub asymptotic: Measure,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub value: Measure,
    /// Optimal `k` (Hermite) or `b` (Laguerre); absent for Jacobi.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Audits {
    /// `delta x <= Delta x`; `None` when the Fisher length is undefined or
    /// `rho_n` does not vanish at a finite endpoint (the inequality needs it).
    pub cramer_rao: Option<bool>,
    pub shannon_inequality: Option<Audit>,
    pub bound_dominance: Option<Audit>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub family: FamilyDescriptor,
    pub n: usize,
    pub stddev: Measure,
    pub fisher_length: Measure,
    pub renyi: Vec<RenyiEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shannon: Option<ShannonEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundEntry>,
    pub audits: Audits,
}

/// What to compute besides the closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub orders: Vec<RenyiOrder>,
    pub shannon: bool,
    pub bound: bool,
    /// Run the Lauricella route for Laguerre families.
    pub lauricella: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            orders: vec![RenyiOrder::integer(2).expect("2 is a valid order")],
            shannon: true,
            bound: true,
            lauricella: true,
        }
    }
}

/// Whether `rho_n` vanishes at every finite endpoint of its support.
fn vanishes_at_endpoints(family: &Family) -> bool {
    match family.kind() {
        FamilyKind::Hermite => true,
        FamilyKind::Laguerre => family.alpha() > 0.0,
        FamilyKind::Jacobi => family.alpha() > 0.0 && family.beta() > 0.0,
    }
}

fn length_of(w: Result<f64>, q: RenyiOrder) -> Result<f64> {
    length_from_functional(w?, q)
}

pub fn measure_report(family: &Family, n: usize, opts: &ReportOptions, ctx: &PrecisionContext) -> Result<MeasureReport> {
    let sigma = stddev(family, n);
    let delta = fisher_length(family, n);
    let mut renyi = Vec::with_capacity(opts.orders.len());
    for &q in &opts.orders {
        if q.is_shannon() {
            return Err(Error::InvalidArgument("q = 1 is the Shannon length; request it separately".into()));
        }
        let lauricella = (opts.lauricella && family.kind() == FamilyKind::Laguerre).then(|| {
            Measure::from_result(
                length_of(power_functional_lauricella(n, family.alpha(), q, ctx), q),
                Provenance::Lauricella,
            )
        });
        renyi.push(RenyiEntry {
            order: q,
            bell: Measure::from_result(length_of(power_functional_bell(family, n, q, ctx), q), Provenance::Bell)?,
            lauricella: lauricella.transpose()?,
            oracle: Measure::from_result(length_of(integrate_density_power(family, n, q, ctx), q), Provenance::Oracle)?,
            absolute: (q.two_q() % 2 == 1)
                .then(|| {
                    let w = integrate_abs_density_power(family, n, q, ctx).map(|i| i.value);
                    Measure::from_result(length_of(w, q), Provenance::Oracle)
                })
                .transpose()?,
        });
    }

    let numeric = if opts.shannon { Some(shannon_numeric(family, n, ctx)?) } else { None };
    let shannon = numeric.map(|s| ShannonEntry {
        numeric: Measure::new(s.length, Provenance::Oracle),
        est_error: s.est_error,
        asymptotic: match shannon_asymptotic(family, n) {
            Ok(a) => Measure::new(a.length, Provenance::Asymptotic),
            Err(e) => Measure::undefined(Provenance::Asymptotic, e.to_string()),
        },
    });
    let bound = if opts.bound {
        let b = optimize_bound(family, n)?;
        Some(BoundEntry { value: Measure::new(b.value, Provenance::ClosedForm), parameter: b.parameter })
    } else {
        None
    };

    let entropy_error = numeric.and_then(|s| s.est_error).unwrap_or(0.0);
    let audits = Audits {
        cramer_rao: (vanishes_at_endpoints(family) && delta.is_finite() && delta > 0.0).then_some(delta <= sigma),
        shannon_inequality: numeric
            .map(|s| Audit::new(s.length, (2.0 * std::f64::consts::PI * std::f64::consts::E).sqrt() * sigma, entropy_error)),
        bound_dominance: numeric.zip(bound.as_ref()).and_then(|(s, b)| {
            b.value.value.map(|v| Audit::new(s.length, v, entropy_error))
        }),
    };

    Ok(MeasureReport {
        family: family.into(),
        n,
        stddev: Measure::new(sigma, Provenance::ClosedForm),
        fisher_length: Measure::new(delta, Provenance::ClosedForm),
        renyi,
        shannon,
        bound,
        audits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_ground_state_report() {
        let r = measure_report(&Family::hermite(), 0, &ReportOptions::default(), &PrecisionContext::default()).unwrap();
        assert_eq!(r.stddev.provenance, Provenance::ClosedForm);
        let l2 = r.renyi[0].bell.value.unwrap();
        assert!((l2 - (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-13);
        assert!(r.renyi[0].lauricella.is_none());
        assert_eq!(r.audits.cramer_rao, Some(true));
        assert!(r.audits.shannon_inequality.unwrap().holds);
        assert!(r.shannon.unwrap().asymptotic.value.is_none());
    }

    #[test]
    fn divergent_order_is_undefined_not_an_error() {
        let opts = ReportOptions { orders: vec![RenyiOrder::integer(3).unwrap()], ..ReportOptions::default() };
        let r = measure_report(&Family::laguerre(-0.5).unwrap(), 2, &opts, &PrecisionContext::default()).unwrap();
        assert!(r.renyi[0].bell.value.is_none());
        assert!(r.renyi[0].oracle.note.as_deref().unwrap().starts_with("divergent"));
        assert_eq!(r.audits.cramer_rao, None);
    }

    #[test]
    fn odd_orders_carry_the_density_length() {
        let opts = ReportOptions { orders: vec![RenyiOrder::new(3).unwrap()], shannon: false, bound: false, lauricella: true };
        let r = measure_report(&Family::laguerre(2.0).unwrap(), 1, &opts, &PrecisionContext::default()).unwrap();
        let e = &r.renyi[0];
        // signed: int p_1^3 x^3 e^{-3x/2} dx; absolute value from mpmath
        assert!((e.bell.value.unwrap() - 498.2259375).abs() < 1e-9);
        assert!((e.absolute.as_ref().unwrap().value.unwrap() - 8.670_026_793_378_856).abs() < 1e-9);
    }

    #[test]
    fn infinite_values_serialize_as_strings() {
        let m = Measure::new(f64::INFINITY, Provenance::ClosedForm);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#"{"value":"inf","provenance":"closed_form"}"#);
    }
}
