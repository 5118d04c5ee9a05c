//! Exact arithmetic: arbitrary-precision rationals, multivariate polynomials in
//! `(x_1..x_n, y_1..y_n, s)` and univariate radial polynomials in `r`.
//!
//! Everything here is exact; floats only appear in the explicit `eval_f64`
//! helpers used by the numeric oracles.

mod mpoly;
mod radial;

pub use mpoly::{MPoly, Var};
pub use radial::RadialPoly;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// `value^exp` for a signed integer exponent. Panics on `0^negative`.
pub fn rat_powi(value: &Rational, exp: i64) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    let mut acc = Rational::one();
    let base = if exp < 0 {
        assert!(!value.is_zero(), "zero raised to a negative power");
        value.recip()
    } else {
        value.clone()
    };
    for _ in 0..exp.unsigned_abs() {
        acc *= &base;
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Floor of a rational as a signed integer.
pub fn rat_floor(value: &Rational) -> i64 {
    value
        .floor()
        .to_integer()
        .to_i64()
        .expect("rational floor out of i64 range")
}

pub fn is_nonnegative(value: &Rational) -> bool {
    !value.is_negative()
}
