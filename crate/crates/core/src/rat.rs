//! Exact rational scalars.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always normalized (lowest terms, positive
/// denominator).
pub type Rat = num_rational::BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn half() -> Rat {
    ratio(1, 2)
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rat {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rat::from_integer(p)
    } else {
        Rat::new(BigInt::one(), p)
    }
}

pub fn sign(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn in_unit_interval(x: &Rat) -> bool {
    x.abs() <= Rat::one()
}

pub fn check_domain(x: &Rat) -> Result<()> {
    if in_unit_interval(x) {
        Ok(())
    } else {
        Err(Error::Domain(x.clone()))
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `-0.125` or `1e-3`.
/// Decimals are converted exactly to `p / 10^m`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let err = || Error::Parse(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rat::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| err())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{frac}");
    let n: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| err())? };
    let scale = exponent - frac.len() as i64;
    let ten = Rat::from_integer(BigInt::from(10));
    let mut v = Rat::from_integer(n);
    if scale >= 0 {
        v *= num_traits::pow(ten, scale as usize);
    } else {
        v /= num_traits::pow(ten, scale.unsigned_abs() as usize);
    }
    Ok(if neg { -v } else { v })
}

/// Smallest integer `n` with `n >= x`.
pub fn ceil_int(x: &Rat) -> BigInt {
    x.numer().div_ceil(x.denom())
}

pub fn floor_int(x: &Rat) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Serde helpers writing rationals as `p/q` strings (integers as `p`).
pub mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{parse_rat, Rat};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).map_err(serde::de::Error::custom)
    }
}
