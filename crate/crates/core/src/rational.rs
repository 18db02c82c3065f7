//! Exact rationals.
//!
//! [`Rational`] is `num_rational::BigRational`, which always keeps its value in
//! lowest terms with a positive denominator. Serialized form is `"p/q"`, or
//! `"p"` when the denominator is 1.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn to_string(value: &Rational) -> String {
    value.to_string()
}

/// Parses `"p/q"` or `"p"`. Zero denominators are rejected.
pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text, "1"),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {text:?}")))?;
    let denom: BigInt = denom
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {text:?}")))?;
    if denom.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(to_string(&frac(2, -4)), "-1/2");
        assert_eq!(to_string(&frac(6, 3)), "2");
        assert_eq!(to_string(&zero()), "0");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse(" 1 / 8 ").unwrap(), frac(1, 8));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn integer_power_is_exact() {
        let x = frac(-2, 3);
        assert_eq!(num_traits::pow(x, 3), frac(-8, 27));
    }
}
