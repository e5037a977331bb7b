//! Exact rational helpers and the `"a/b"` string encoding used on the wire.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| q(x)).collect()
}

/// Parses `"a"` or `"a/b"`; rejects zero denominators.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, Error> {
    s.split(',').map(parse_rational).collect()
}

/// Lowest terms, positive denominator; integers print without `/1`.
pub fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn to_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn floor_int(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// LCM of the denominators of `v`.
pub fn denominator_lcm(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Decimal rendering with `digits` significant digits, for display only.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let neg = x.is_negative();
    let a = x.abs();
    // exponent e with 10^e <= a < 10^(e+1)
    let ten = Rational::from_integer(BigInt::from(10));
    let mut e: i64 = 0;
    let mut scaled = a.clone();
    while scaled >= ten {
        scaled /= &ten;
        e += 1;
    }
    while scaled < Rational::one() {
        scaled *= &ten;
        e -= 1;
    }
    let shift = digits as i64 - 1 - e;
    let factor = BigInt::from(10).pow(shift.unsigned_abs() as u32);
    let m = if shift >= 0 {
        a * Rational::from_integer(factor.clone())
    } else {
        a / Rational::from_integer(factor.clone())
    };
    let int = m.round().to_integer();
    let mut s = if shift > 0 {
        let raw = int.to_string();
        let sh = shift as usize;
        let padded = if raw.len() <= sh {
            format!("{}{}", "0".repeat(sh + 1 - raw.len()), raw)
        } else {
            raw
        };
        let (i, f) = padded.split_at(padded.len() - sh);
        let f = f.trim_end_matches('0');
        if f.is_empty() {
            i.to_string()
        } else {
            format!("{i}.{f}")
        }
    } else {
        (int * factor).to_string()
    };
    if neg {
        s.insert(0, '-');
    }
    s
}

pub mod serde_q {
    //! `#[serde(with = ...)]` adapters writing rationals as strings.
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&fmt_rational(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
