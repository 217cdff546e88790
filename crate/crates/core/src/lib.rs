//! Exact local constants of p-adic fields with coefficients in rings.
//!
//! Everything is generic over a coefficient ring implementing
//! [`ring::Scalar`]; the aliases below fix the rings used in practice.

pub mod doubling;
pub mod error;
pub mod families;
pub mod fraction;
pub mod laurent;
pub mod local;
pub mod normalizer;
pub mod ring;
pub mod tate;
pub mod wire;

pub use error::{Error, Result};
pub use fraction::{geometric_tail_sum, s_membership, series_match, LocFraction, TruncSeries};
pub use laurent::LaurentPoly;
pub use ring::{Cyc, Fp, Scalar};

/// Laurent polynomials over the rationals.
pub type QPoly = LaurentPoly<num_rational::BigRational>;
/// Laurent polynomials over a cyclotomic field.
pub type CycPoly = LaurentPoly<Cyc>;
/// The localization over a cyclotomic field.
pub type CycFrac = LocFraction<Cyc>;
/// The localization over the universal character ring.
pub type UnivFrac = LocFraction<families::Universal>;
