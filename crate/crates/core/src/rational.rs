//! Exact rational scalars, their textual forms, and decimal rendering.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Arbitrary-precision rational used for every probability, price and LP value.
pub type Rational = num_rational::BigRational;

/// Builds `numer / denom`. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn from_biguint(value: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(value.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` is not an exact rational (expected \"p/q\" or an integer)", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"p/q"` or an integer. Surrounding whitespace is ignored.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let trimmed = text.trim();
    let parse_int = |s: &str| -> Result<BigInt, ParseRationalError> {
        let s = s.trim();
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        s.parse::<BigInt>().map_err(|_| err())
    };
    match trimmed.split_once('/') {
        Some((n, d)) => {
            let denom = parse_int(d)?;
            if denom.is_zero() || d.trim().starts_with(['-', '+']) {
                return Err(err());
            }
            Ok(Rational::new(parse_int(n)?, denom))
        }
        None => Ok(Rational::from_integer(parse_int(trimmed)?)),
    }
}

/// Canonical exact rendering: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Renders `value` in plain positional notation with `digits` significant
/// digits, rounding half away from zero.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    assert!(digits > 0);
    if value.is_zero() {
        return if digits == 1 { "0".into() } else { format!("0.{}", "0".repeat(digits - 1)) };
    }
    let negative = value.is_negative();
    let magnitude = value.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= |x| < 10^(e+1)
    let mut exponent: i64 = magnitude.numer().to_string().len() as i64
        - magnitude.denom().to_string().len() as i64;
    let pow10 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while magnitude < pow10(exponent) {
        exponent -= 1;
    }
    while magnitude >= pow10(exponent + 1) {
        exponent += 1;
    }

    let round = |e: i64| -> BigInt {
        let scaled = &magnitude * pow10(digits as i64 - 1 - e);
        let (q, r) = scaled.numer().div_rem(scaled.denom());
        if r * 2 >= *scaled.denom() {
            q + 1
        } else {
            q
        }
    };
    let mut mantissa = round(exponent);
    if mantissa.to_string().len() > digits {
        exponent += 1;
        mantissa = round(exponent);
    }
    let text = mantissa.to_string();
    // position of the decimal point measured from the start of `text`
    let point = exponent + 1;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), text)
    } else if point as usize >= text.len() {
        format!("{}{}", text, "0".repeat(point as usize - text.len()))
    } else {
        let (head, tail) = text.split_at(point as usize);
        format!("{head}.{tail}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Approximate `f64` value, for display only.
pub fn approx_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Scales a non-zero vector of rationals to the primitive integer vector on the
/// same ray (positive scaling only).
pub fn primitive_integer_ray(values: &[Rational]) -> Vec<Rational> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = values
        .iter()
        .map(|v| (v * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return values.to_vec();
    }
    scaled
        .into_iter()
        .map(|v| Rational::from_integer(v / &gcd))
        .collect()
}
