//! Exact rational scalars and their text form.
//!
//! Values are `p/q` in lowest terms with `q > 0`, or a bare integer `p`
//! when `q = 1`. Both forms parse back to the same value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Renders `value` as `p/q` (or `p`).
pub fn format_rational(value: &Rational) -> String {
    // `Ratio` is always kept reduced with a positive denominator, and its
    // Display omits a unit denominator.
    value.to_string()
}

/// Parses `p/q` or `p`. Surrounding whitespace is ignored; a zero
/// denominator is rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer.parse().map_err(|_| bad())?;
    let denom: BigInt = denom.parse().map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
pub fn format_decimal(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return if value.is_finite() { "0".into() } else { value.to_string() };
    }
    let magnitude = value.abs().log10().floor() as i32;
    if !(-6..=15).contains(&magnitude) {
        return format!("{:.11e}", value);
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{:.*}", decimals, value);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// `value` rounded to 12 significant digits.
pub fn round12(value: f64) -> f64 {
    format_decimal(value).parse().unwrap_or(value)
}
