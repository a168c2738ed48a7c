//! Exact arithmetic tower: rationals, the cyclotomic field K = Q(z8),
//! polynomials and rational functions in `u` over K, and truncated
//! power series in `u^{-1}`.

mod field;
mod pade;
mod poly;
mod ratfun;
mod series;

pub use field::ScalarK;
pub use pade::{pade, rational_reconstruct};
pub use poly::PolyU;
pub use ratfun::RatFunU;
pub use series::{ratfun_to_series, series_shift, TruncSeriesU};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use std::fmt::Debug;

/// Exact rational numbers.
pub type Q = BigRational;

/// Default truncation order for series-valued checks.
pub const DEFAULT_ORDER: usize = 8;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or a decimal-free signed integer fraction.
pub fn parse_q(s: &str) -> Result<Q, ScalarError> {
    let s = s.trim();
    let bad = || ScalarError::Parse(s.to_string());
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => {
            let a: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(a))
        }
    }
}

/// Text form of a rational: `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn q_is_neg(x: &Q) -> bool {
    x.is_negative()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("rational function is improper at infinity (numerator degree exceeds denominator degree by {gap})")]
    Improper { gap: usize },
    #[error("evaluation at a pole u = {at}")]
    Pole { at: String },
    #[error("series constant term is not invertible")]
    NotUnit,
}

/// Commutative-or-not ring operations used by the generic matrix code.
///
/// Methods take references so that big-number coefficients are not moved
/// around needlessly.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn add_to(&mut self, o: &Self) {
        *self = self.plus(o);
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Rings in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inverse(&self) -> Option<Self>;
}
