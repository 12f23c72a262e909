//! Exact rational scalars used for all coefficients, points and solver arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact arbitrary-precision rational number. No floating point is used anywhere.
pub type Rational = BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the [`Rational`] `p/q`. Panics on `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses a rational literal: an optionally signed integer (`-3`), a fraction
/// (`2/3`), or a finite decimal (`0.25`, `-1.5e2` is *not* accepted).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(ParseRationalError(s.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let p: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseRationalError(s.to_string()))?;
        let q: BigInt = den
            .trim()
            .parse()
            .map_err(|_| ParseRationalError(s.to_string()))?;
        if q.is_zero() {
            return Err(ParseRationalError(s.to_string()));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError(s.to_string()));
        }
        let (sign, int_digits) = match int_part.as_bytes().first() {
            Some(b'-') => (-1, &int_part[1..]),
            Some(b'+') => (1, &int_part[1..]),
            _ => (1, int_part),
        };
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError(s.to_string()));
        }
        let joined = format!("{}{}", int_digits, frac_part);
        let p: BigInt = joined
            .parse()
            .map_err(|_| ParseRationalError(s.to_string()))?;
        let q = BigInt::from(10u8).pow(frac_part.len() as u32);
        return Ok(Rational::new(BigInt::from(sign) * p, q));
    }
    let p: BigInt = s.parse().map_err(|_| ParseRationalError(s.to_string()))?;
    Ok(Rational::from_integer(p))
}

/// Renders a rational exactly: `p` when integral, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a rational as a finite decimal if its reduced denominator only has
/// prime factors 2 and 5. Trailing zeros are trimmed.
pub fn to_exact_decimal(r: &Rational) -> Option<String> {
    let mut q = r.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&q % &two).is_zero() {
        q /= &two;
        twos += 1;
    }
    while (&q % &five).is_zero() {
        q /= &five;
        fives += 1;
    }
    if !q.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return Some(r.numer().to_string());
    }
    let scaled = (r.numer() * BigInt::from(10u8).pow(digits) / r.denom()).abs();
    let mut text = scaled.to_string();
    while text.len() <= digits as usize {
        text.insert(0, '0');
    }
    text.insert(text.len() - digits as usize, '.');
    while text.ends_with('0') {
        text.pop();
    }
    if text.ends_with('.') {
        text.pop();
    }
    if r.is_negative() {
        text.insert(0, '-');
    }
    Some(text)
}

/// A string that could not be parsed as a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal: {0:?}")]
pub struct ParseRationalError(pub String);
