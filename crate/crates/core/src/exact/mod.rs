//! Exact scalars, graded sparse polynomials and linear algebra over the rationals.

mod matrix;
mod poly;

pub use matrix::{LinearSolution, RatMatrix};
pub use poly::{Monomial, Poly, Ring, Variable};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    text.trim()
        .parse::<Rational>()
        .map_err(|_| Error::MalformedRational(text.to_string()))
}

/// `"p/q"`, with the denominator omitted when it is 1.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Decimal rendering rounded half away from zero to `digits` fractional digits.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = value.numer().abs() * &scale;
    let (q, r) = scaled.div_rem(value.denom());
    let rounded = if r * 2 >= *value.denom() { q + 1 } else { q };
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !(int_part.is_zero() && frac_part.is_zero()) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part:0>digits$}")
    }
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `1 / k!`
pub fn inv_factorial(k: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(k))
}

pub fn rational_pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}
