//! The three classical orthogonal polynomial families and their weights.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Hermite,
    Laguerre,
    Jacobi,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Hermite => "hermite",
            FamilyKind::Laguerre => "laguerre",
            FamilyKind::Jacobi => "jacobi",
        }
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hermite" | "h" => Ok(FamilyKind::Hermite),
            "laguerre" | "l" => Ok(FamilyKind::Laguerre),
            "jacobi" | "j" => Ok(FamilyKind::Jacobi),
            other => Err(Error::InvalidFamily(format!("unknown family '{other}'"))),
        }
    }
}

/// Orthogonality support of a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };
    pub const HALF_LINE: Interval = Interval {
        lower: 0.0,
        upper: f64::INFINITY,
    };
    pub const UNIT: Interval = Interval {
        lower: -1.0,
        upper: 1.0,
    };

    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower >= upper {
            return Err(Error::InvalidArgument(format!(
                "empty interval [{lower}, {upper}]"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }

    pub fn contains_open(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    pub fn is_finite(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }
}

/// A classical family: Hermite `e^{-x^2}`, Laguerre `x^a e^{-x}` or Jacobi
/// `(1-x)^a (1+x)^b`. Parameters are validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Family {
    kind: FamilyKind,
    alpha: f64,
    beta: f64,
}

impl Family {
    pub fn hermite() -> Self {
        Self {
            kind: FamilyKind::Hermite,
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn laguerre(alpha: f64) -> Result<Self> {
        check_parameter("alpha", alpha)?;
        Ok(Self {
            kind: FamilyKind::Laguerre,
            alpha,
            beta: 0.0,
        })
    }

    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        check_parameter("alpha", alpha)?;
        check_parameter("beta", beta)?;
        Ok(Self {
            kind: FamilyKind::Jacobi,
            alpha,
            beta,
        })
    }

    /// Builds a family from a kind and optional parameters (missing ones are 0).
    pub fn from_parts(kind: FamilyKind, alpha: Option<f64>, beta: Option<f64>) -> Result<Self> {
        match kind {
            FamilyKind::Hermite => {
                if alpha.is_some() || beta.is_some() {
                    return Err(Error::InvalidFamily(
                        "hermite takes no alpha/beta parameters".into(),
                    ));
                }
                Ok(Self::hermite())
            }
            FamilyKind::Laguerre => {
                if beta.is_some() {
                    return Err(Error::InvalidFamily("laguerre takes no beta parameter".into()));
                }
                Self::laguerre(alpha.unwrap_or(0.0))
            }
            FamilyKind::Jacobi => Self::jacobi(alpha.unwrap_or(0.0), beta.unwrap_or(0.0)),
        }
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// Laguerre/Jacobi `alpha`; `0` for Hermite.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Jacobi `beta`; `0` otherwise.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn interval(&self) -> Interval {
        match self.kind {
            FamilyKind::Hermite => Interval::REAL_LINE,
            FamilyKind::Laguerre => Interval::HALF_LINE,
            FamilyKind::Jacobi => Interval::UNIT,
        }
    }

    /// Weight even under `x -> -x` (Hermite, and Jacobi with `alpha == beta`).
    pub fn is_symmetric(&self) -> bool {
        match self.kind {
            FamilyKind::Hermite => true,
            FamilyKind::Laguerre => false,
            FamilyKind::Jacobi => self.alpha == self.beta,
        }
    }

    /// Image under `x -> -x`: Jacobi swaps its parameters, Hermite is unchanged.
    pub fn reflected(&self) -> Option<Self> {
        match self.kind {
            FamilyKind::Hermite => Some(*self),
            FamilyKind::Laguerre => None,
            FamilyKind::Jacobi => Some(Self {
                alpha: self.beta,
                beta: self.alpha,
                ..*self
            }),
        }
    }

    /// Weight `omega(x)`; zero outside the support.
    pub fn weight(&self, x: f64) -> f64 {
        if !self.interval().contains(x) {
            return 0.0;
        }
        match self.kind {
            FamilyKind::Hermite => (-x * x).exp(),
            FamilyKind::Laguerre => x.powf(self.alpha) * (-x).exp(),
            FamilyKind::Jacobi => (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta),
        }
    }

    /// `ln omega(x)` expressed through the distances to the support ends, so
    /// that points very close to a finite endpoint keep full relative accuracy.
    pub(crate) fn ln_weight_gaps(&self, x: f64, from_lower: f64, from_upper: f64) -> f64 {
        match self.kind {
            FamilyKind::Hermite => -x * x,
            FamilyKind::Laguerre => {
                if self.alpha == 0.0 {
                    -x
                } else {
                    self.alpha * from_lower.ln() - x
                }
            }
            FamilyKind::Jacobi => {
                let mut acc = 0.0;
                if self.alpha != 0.0 {
                    acc += self.alpha * from_upper.ln();
                }
                if self.beta != 0.0 {
                    acc += self.beta * from_lower.ln();
                }
                acc
            }
        }
    }

    /// Logarithmic derivative `omega'(x) / omega(x)`, again through endpoint gaps.
    pub(crate) fn ln_weight_derivative_gaps(&self, x: f64, from_lower: f64, from_upper: f64) -> f64 {
        match self.kind {
            FamilyKind::Hermite => -2.0 * x,
            FamilyKind::Laguerre => {
                if self.alpha == 0.0 {
                    -1.0
                } else {
                    self.alpha / from_lower - 1.0
                }
            }
            FamilyKind::Jacobi => {
                let mut acc = 0.0;
                if self.alpha != 0.0 {
                    acc -= self.alpha / from_upper;
                }
                if self.beta != 0.0 {
                    acc += self.beta / from_lower;
                }
                acc
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Hermite => write!(f, "hermite"),
            FamilyKind::Laguerre => write!(f, "laguerre(alpha={})", self.alpha),
            FamilyKind::Jacobi => write!(f, "jacobi(alpha={}, beta={})", self.alpha, self.beta),
        }
    }
}

fn check_parameter(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > -1.0 {
        Ok(())
    } else {
        Err(Error::InvalidFamily(format!("{name} must be finite and > -1, got {value}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inadmissible_parameters() {
        assert!(Family::laguerre(-1.0).is_err());
        assert!(Family::laguerre(f64::NAN).is_err());
        assert!(Family::jacobi(0.0, -1.5).is_err());
        assert!(Family::jacobi(-0.999, 3.0).is_ok());
        assert!(Family::from_parts(FamilyKind::Hermite, Some(1.0), None).is_err());
        assert!(Family::from_parts(FamilyKind::Laguerre, None, Some(1.0)).is_err());
    }

    #[test]
    fn interval_follows_kind() {
        assert_eq!(Family::hermite().interval(), Interval::REAL_LINE);
        assert_eq!(Family::laguerre(2.0).unwrap().interval(), Interval::HALF_LINE);
        assert_eq!(Family::jacobi(2.0, 1.0).unwrap().interval(), Interval::UNIT);
    }

    #[test]
    fn weights() {
        assert_eq!(Family::hermite().weight(0.0), 1.0);
        assert_eq!(Family::laguerre(0.0).unwrap().weight(-1.0), 0.0);
        let j = Family::jacobi(1.0, 2.0).unwrap();
        assert!((j.weight(0.5) - 0.5 * 2.25).abs() < 1e-15);
        assert_eq!(j.reflected().unwrap().alpha(), 2.0);
        assert!(Family::jacobi(0.5, 0.5).unwrap().is_symmetric());
    }

    #[test]
    fn parse_kind() {
        assert_eq!("Hermite".parse::<FamilyKind>().unwrap(), FamilyKind::Hermite);
        assert!("chebyshev".parse::<FamilyKind>().is_err());
    }
}
