//! Small parsing/printing helpers shared by the library, CLI, and tests.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Parses a plain decimal literal (optional sign, optional fraction,
/// optional e-exponent) into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..]
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent in `{}`", s)))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (sign, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::InvalidParameter(format!("bad decimal `{}`", s)));
    }
    let all: String = format!("{}{}", int_part, frac_part);
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return Err(Error::InvalidParameter(format!("bad decimal `{}`", s)));
    }
    let num: BigInt = all
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad decimal `{}`", s)))?;
    let shift = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(num * BigInt::from(sign));
    if shift >= 0 {
        value *= BigRational::from_integer(ten.pow(shift as u32));
    } else {
        value /= BigRational::from_integer(ten.pow((-shift) as u32));
    }
    Ok(value)
}

/// Shortest round-trip decimal for an f64 (Rust's Display already is).
pub fn f64_shortest(x: f64) -> String {
    format!("{}", x)
}

pub fn bigint_is_one(x: &BigInt) -> bool {
    x.is_one()
}

pub fn bigint_is_zero(x: &BigInt) -> bool {
    x.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_forms() {
        assert_eq!(
            parse_decimal("1.5").unwrap(),
            BigRational::new(BigInt::from(3), BigInt::from(2))
        );
        assert_eq!(
            parse_decimal("-0.25").unwrap(),
            BigRational::new(BigInt::from(-1), BigInt::from(4))
        );
        assert_eq!(
            parse_decimal("1e-3").unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(1000))
        );
        assert_eq!(
            parse_decimal("2.5e2").unwrap(),
            BigRational::from_integer(BigInt::from(250))
        );
        assert!(parse_decimal("abc").is_err());
    }
}
