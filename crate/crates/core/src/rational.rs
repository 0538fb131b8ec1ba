//! Helpers around arbitrary-precision rationals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

/// Parses `"a"`, `"-a/b"` and similar.
pub fn parse_rational(s: &str) -> Result<Rational> {
    match s.split_once('/') {
        Some((n, d)) => from_parts(n, d),
        None => Ok(Rational::from_integer(parse_bigint(s)?)),
    }
}

pub fn from_parts(numerator: &str, denominator: &str) -> Result<Rational> {
    let n = parse_bigint(numerator)?;
    let d = parse_bigint(denominator)?;
    if d.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

fn integer_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Non-negative rational square root, if one exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = integer_sqrt_exact(q.numer())?;
    let d = integer_sqrt_exact(q.denom())?;
    Some(Rational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_sqrt() {
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rational_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rational_sqrt(&ratio(2, 1)), None);
        assert_eq!(rational_sqrt(&ratio(-1, 1)), None);
        assert_eq!(rational_sqrt(&rat(0)), Some(rat(0)));
    }
}
