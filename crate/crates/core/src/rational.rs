//! Exact rational numbers and the text forms used by the file formats.

use alloc::string::ToString;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` in lowest terms. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(items: I) -> Rational {
    items.into_iter().fold(Rational::zero(), |acc, x| acc + x)
}

/// Parses `p`, `p/q`, or a finite decimal such as `-1.25` exactly.
pub fn parse(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut digits = alloc::string::String::from(whole_digits);
        digits.push_str(frac);
        let mut numer = BigInt::from_str(&digits).map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10u32), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Nearest integer to `x`, halves rounded up.
pub fn round_half_up(x: &Rational) -> BigInt {
    (x + ratio(1, 2)).floor().to_integer()
}

/// Nearest integer to `sqrt(x)` for `x >= 0`, halves rounded up.
pub fn round_sqrt(x: &Rational) -> BigInt {
    debug_assert!(!x.is_negative());
    // floor(sqrt(x) + 1/2) = floor((floor(2 sqrt(x)) + 1) / 2)
    let four_x = (x * int(4)).floor().to_integer();
    let twice_root = four_x.sqrt();
    (twice_root + BigInt::one()).div_floor(&BigInt::from(2))
}
