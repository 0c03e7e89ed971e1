//! Exact arithmetic kernel: arbitrary-precision rationals, Laurent
//! polynomials in the three torus characters, and character fractions
//! with denominators of the form `prod (1 - t^v)`.

mod fraction;
mod laurent;
mod weight;

pub use fraction::{combine_all, series_oracle, CharFraction};
pub use laurent::LaurentPoly;
pub use weight::Weight;

use num_bigint::BigInt;
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rat = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Renders integers bare and proper fractions as `p/q`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => {
            let n: BigInt = s.trim().parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    /// The fraction is not a Laurent polynomial; signals a modeling bug upstream.
    #[error("character fraction does not reduce to a Laurent polynomial")]
    NotPolynomial,
    /// The chosen functional vanishes on a denominator weight.
    #[error("functional is degenerate on denominator weight {0:?}")]
    DegenerateFunctional(Weight),
}
