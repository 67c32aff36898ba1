//! The scalar field: truncated Puiseux series in a positive infinitesimal `eps`
//! with rational coefficients and rational exponents.
//!
//! `eps` is smaller than every positive rational, so the sign of a series is the
//! sign of its leading coefficient, its valuation is its leading exponent, and
//! its residue is its `eps^0` coefficient. Together these make the field an
//! ordered valued field: `0 < a <= b` implies `val(b) <= val(a)`.

mod rational;
mod series;
mod value;

use std::sync::atomic::{AtomicI64, Ordering};

pub use rational::{
    exact_sqrt, fmt_rational, four_squares, int, integer_four_squares, is_probable_prime, rat,
    round_to_denominator, to_f64, Rational,
};
pub use series::{ArithOp, FieldElement};
pub use value::Value;

/// Exponents are exact rationals with small denominators.
pub type Exponent = num_rational::Ratio<i64>;

static EXPONENT_DENOMINATOR_CAP: AtomicI64 = AtomicI64::new(64);
static DEFAULT_PRECISION: AtomicI64 = AtomicI64::new(32);

pub fn exponent_denominator_cap() -> i64 {
    EXPONENT_DENOMINATOR_CAP.load(Ordering::Relaxed)
}

pub fn set_exponent_denominator_cap(cap: i64) {
    assert!(cap >= 1);
    EXPONENT_DENOMINATOR_CAP.store(cap, Ordering::Relaxed);
}

/// Number of `eps`-orders kept past the leading term when an operation
/// (inversion, square root) produces an infinite series.
pub fn default_precision() -> i64 {
    DEFAULT_PRECISION.load(Ordering::Relaxed)
}

pub fn set_default_precision(orders: i64) {
    assert!(orders >= 1);
    DEFAULT_PRECISION.store(orders, Ordering::Relaxed);
}

pub fn exp(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}
