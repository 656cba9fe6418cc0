//! Exact rational scalars and their string encoding.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactScalar = BigRational;

pub fn rat(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`; surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Result<ExactScalar> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n = BigInt::from_str(t).map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        Ok(BigRational::from_integer(n))
    }
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &ExactScalar) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Representative of `q` modulo 1 in `[0, 1)`.
pub fn mod_one(q: &ExactScalar) -> ExactScalar {
    q - q.floor()
}

/// Representative of `q` modulo `m` in `[0, m)`; `q` must be an integer.
pub fn mod_int(q: &ExactScalar, m: &BigInt) -> ExactScalar {
    BigRational::from_integer(q.to_integer().mod_floor(m))
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a ExactScalar>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn is_integer(q: &ExactScalar) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("6/-4").unwrap(), frac(-3, 2));
        assert_eq!(format_rational(&frac(-3, 2)), "-3/2");
        assert_eq!(format_rational(&frac(4, 2)), "2");
        assert_eq!(parse_rational(" 7 ").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn reductions() {
        assert_eq!(mod_one(&frac(-1, 4)), frac(3, 4));
        assert_eq!(mod_one(&frac(5, 4)), frac(1, 4));
        assert_eq!(mod_int(&rat(-1), &BigInt::from(4)), rat(3));
        assert_eq!(lcm_of_denominators(&[frac(1, 4), frac(1, 6)]), BigInt::from(12));
    }
}
