//! Exact rational scalars.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = num_rational::BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^k` as a scalar.
pub fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// Parses `p/q` or integer notation. Zero denominators are rejected.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::Argument(format!("invalid rational {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Argument(format!("zero denominator in {s:?}")));
            }
            Ok(Scalar::new(n, d))
        }
        None => {
            let n: BigInt = t.parse().map_err(|_| bad())?;
            Ok(Scalar::from_integer(n))
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_unit_sign(x: &Scalar) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_scalar("-7").unwrap(), int(-7));
        assert_eq!(format_scalar(&ratio(-3, 6)), "-1/2");
        assert_eq!(format_scalar(&int(5)), "5");
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(sign(-3), int(-1));
        assert_eq!(sign(4), int(1));
        assert!(is_unit_sign(&sign(7)));
    }
}
