//! Exact rational helpers: strict `a/b` parsing and decimal rendering.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Parses `a/b` or a bare integer `a`. Decimal notation is rejected.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    if text.contains(['.', 'e', 'E']) {
        return Err(Error::domain(format!(
            "`{text}`: decimal input is not accepted, write an exact fraction a/b"
        )));
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::domain(format!("`{text}`: bad numerator")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::domain(format!("`{text}`: bad denominator")))?;
    if den.is_zero() {
        return Err(Error::domain(format!("`{text}`: zero denominator")));
    }
    Ok(BigRational::new(num, den))
}

/// Formats as `a/b`, or `a` when the denominator is 1.
pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Renders `x` with `digits` fractional digits, rounding half to even.
pub fn render_decimal(x: &BigRational, digits: usize) -> String {
    let negative = x.is_negative();
    let abs = x.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = abs.numer() * &scale;
    let (mut q, r) = scaled.div_rem(abs.denom());
    let twice = &r * 2u32;
    match twice.cmp(abs.denom()) {
        std::cmp::Ordering::Greater => q += 1u32,
        std::cmp::Ordering::Equal if q.is_odd() => q += 1u32,
        _ => {}
    }
    let s = q.to_string();
    let body = if digits == 0 {
        s
    } else {
        let padded = format!("{:0>width$}", s, width = digits + 1);
        let (int, frac) = padded.split_at(padded.len() - digits);
        format!("{int}.{frac}")
    };
    if negative && !q.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

pub fn pow(x: &BigRational, e: usize) -> BigRational {
    num_traits::pow(x.clone(), e)
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn from_uint(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}
