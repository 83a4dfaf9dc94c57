//! Rényi lengths `L_q = W_q^{-1/(q-1)}`, `W_q = int p_n^{2q} omega^q dx`, for
//! half-integer orders `q = two_q / 2`.
//!
//! For odd `two_q` the power `p_n^{2q}` is the signed polynomial power, so
//! `W_q` can be zero or negative; the length is then undefined and the
//! functions return [`Error::NonPositiveFunctional`]. The Rényi length of
//! `|p_n|^{2q} omega^q` for odd `two_q` is available through
//! [`crate::quadrature::integrate_abs_density_power`].

pub mod bell;
pub mod displays;
pub mod lauricella;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, FamilyKind};

pub use bell::{
    bell_polynomial, bell_polynomial_enumerated, power_coeffs, power_functional_bell, renyi_length_bell,
    BellTable,
};
pub use lauricella::{
    laguerre_n0_closed_form, laguerre_n1_closed_form, lauricella_fa_enumerated, lauricella_fa_terminating,
    power_functional_lauricella, renyi_length_laguerre_lauricella, theta_coefficient, ThetaCoefficient,
};

/// Order `q = two_q / 2` with `two_q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RenyiOrder {
    two_q: u32,
}

impl RenyiOrder {
    pub fn new(two_q: u32) -> Result<Self> {
        if two_q == 0 {
            return Err(Error::InvalidArgument("Renyi order requires 2q >= 1".into()));
        }
        Ok(Self { two_q })
    }

    /// Integer order `q`.
    pub fn integer(q: u32) -> Result<Self> {
        Self::new(2 * q)
    }

    pub fn two_q(&self) -> u32 {
        self.two_q
    }

    pub fn q(&self) -> f64 {
        f64::from(self.two_q) / 2.0
    }

    /// `q = 1`, where the length degenerates to the Shannon length.
    pub fn is_shannon(&self) -> bool {
        self.two_q == 2
    }

    /// Column label such as `L2` or `L3/2`.
    pub fn label(&self) -> String {
        format!("L{self}")
    }

    /// `Err(Divergent)` unless `omega^q` is integrable.
    pub fn check_integrable(&self, family: &Family) -> Result<()> {
        let q = self.q();
        let bad = |name: &str, p: f64| {
            Err(Error::Divergent(format!(
                "{family}: {name} * q = {} <= -1 for q = {self}",
                p * q
            )))
        };
        match family.kind() {
            FamilyKind::Hermite => Ok(()),
            FamilyKind::Laguerre if family.alpha() * q <= -1.0 => bad("alpha", family.alpha()),
            FamilyKind::Laguerre => Ok(()),
            FamilyKind::Jacobi if family.alpha() * q <= -1.0 => bad("alpha", family.alpha()),
            FamilyKind::Jacobi if family.beta() * q <= -1.0 => bad("beta", family.beta()),
            FamilyKind::Jacobi => Ok(()),
        }
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_q.is_multiple_of(2) {
            write!(f, "{}", self.two_q / 2)
        } else {
            write!(f, "{}/2", self.two_q)
        }
    }
}

impl FromStr for RenyiOrder {
    type Err = Error;

    /// Accepts `2`, `3/2`, `6/4` or `1.5`; `2q` must come out a positive integer.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let invalid = || Error::InvalidArgument(format!("'{s}' is not a half-integer Renyi order"));
        let two_q = if let Some((num, den)) = s.split_once('/') {
            let num: u64 = num.trim().parse().map_err(|_| invalid())?;
            let den: u64 = den.trim().parse().map_err(|_| invalid())?;
            if den == 0 || !(2 * num).is_multiple_of(den) {
                return Err(invalid());
            }
            2 * num / den
        } else {
            let value: f64 = s.parse().map_err(|_| invalid())?;
            let doubled = 2.0 * value;
            if !(doubled.is_finite() && doubled >= 1.0 && doubled.fract() == 0.0) {
                return Err(invalid());
            }
            doubled as u64
        };
        let two_q = u32::try_from(two_q).map_err(|_| invalid())?;
        Self::new(two_q)
    }
}

/// Length from a power functional: `W^{-1/(q-1)}`, defined for `W > 0`, `q != 1`.
pub fn length_from_functional(w: f64, q: RenyiOrder) -> Result<f64> {
    if q.is_shannon() {
        return Err(Error::InvalidArgument(
            "q = 1 is the Shannon limit; use the shannon module".into(),
        ));
    }
    if !(w > 0.0) {
        return Err(Error::NonPositiveFunctional { value: w });
    }
    Ok(w.powf(-1.0 / (q.q() - 1.0)))
}

/// `W_q` vanishes identically when the weight is even and `p_n^{2q}` is odd.
pub(crate) fn vanishes_by_parity(family: &Family, n: usize, q: RenyiOrder) -> bool {
    family.is_symmetric() && (n as u64 * u64::from(q.two_q())) % 2 == 1
}
