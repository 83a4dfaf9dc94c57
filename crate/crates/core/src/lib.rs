//! Direct spreading measures of the Rakhmanov densities `rho_n = p_n^2 omega`
//! of the orthonormal Hermite, Laguerre and Jacobi polynomials.

// `!(x > 0.0)` guards are deliberate: NaN must fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod family;
pub mod orthopoly;
pub mod precision;
pub mod quadrature;
pub mod renyi;
pub mod report;
pub mod shannon;
pub mod special;
pub mod spreading;
pub mod verify;

pub use error::{Error, Result};
pub use family::{Family, FamilyKind, Interval};
pub use precision::PrecisionContext;
pub use renyi::RenyiOrder;
