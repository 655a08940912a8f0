//! Exact rationals and their `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(numer: i64, denom: i64) -> Q {
    Q::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `3^k` as an exact rational; negative `k` gives `1/3^|k|`.
pub fn pow3(k: i64) -> Q {
    let p = BigInt::from(3u8).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Q::from_integer(p)
    } else {
        Q::new(BigInt::one(), p)
    }
}

/// Parses `"p/q"` or a bare integer `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| Error::parse("rational", s))?;
    let d: BigInt = d.parse().map_err(|_| Error::parse("rational", s))?;
    if d.is_zero() {
        return Err(Error::parse("rational", s));
    }
    Ok(Q::new(n, d))
}

/// Always renders as `"p/q"`, including integers (`"1/1"`).
pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub mod serde_q {
    //! `#[serde(with = "...")]` adapter writing rationals as `"p/q"` strings.
    use super::{format_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("39/64").unwrap(), q(39, 64));
        assert_eq!(parse_q(" 6/4 ").unwrap(), q(3, 2));
        assert_eq!(parse_q("7").unwrap(), qi(7));
        assert_eq!(format_q(&q(39, 64)), "39/64");
        assert_eq!(format_q(&qi(1)), "1/1");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x/2").is_err());
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_f64(&q(39, 64)), 0.609375);
        assert_eq!(pow3(-2), q(1, 9));
        assert_eq!(pow3(3), qi(27));
    }
}
