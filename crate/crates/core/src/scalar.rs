//! Exact rationals and the deformation parameter.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p / r` as a reduced rational. Panics when `r == 0`.
pub fn frac(p: i64, r: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(r))
}

/// Parses `"p/r"` or `"p"` with an optional leading minus.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|c| c.is_ascii_digit());
    let (p, r) = match body.split_once('/') {
        Some((p, r)) => (p, r),
        None => (body, "1"),
    };
    if !digits(p) || !digits(r) {
        return Err(bad());
    }
    let mut num: BigInt = p.parse().map_err(|_| bad())?;
    let den: BigInt = r.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    if neg {
        num = -num;
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Integer power with negative exponents allowed.
pub fn powi(base: &Rational, e: i64) -> Rational {
    let e32 = i32::try_from(e).expect("exponent out of range");
    if e32 < 0 {
        base.recip().pow(-e32)
    } else {
        base.pow(e32)
    }
}

pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(|r| r.to_string()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

fn is_unit_modulus(r: &Rational) -> bool {
    r.abs().is_one()
}

/// The parameter `b = q^2` on its own.
///
/// Everything in the alternating recursion and in the q-Serre relations is a
/// function of `b`, so this is the type the algebra code consumes. It also
/// covers graphs whose `q` is irrational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BParams {
    b: Rational,
    b_inv: Rational,
}

impl BParams {
    pub fn new(b: Rational) -> Result<Self> {
        if b.is_zero() || is_unit_modulus(&b) {
            return Err(Error::Domain(format!("b = {b} must avoid 0 and ±1")));
        }
        let b_inv = b.recip();
        Ok(BParams { b, b_inv })
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn b_inv(&self) -> &Rational {
        &self.b_inv
    }

    pub fn pow(&self, e: i64) -> Rational {
        powi(&self.b, e)
    }
}

/// A rational deformation parameter `q` with `b = q^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QParams {
    q: Rational,
    bp: BParams,
}

impl QParams {
    pub fn new(q: Rational) -> Result<Self> {
        if q.is_zero() || is_unit_modulus(&q) {
            return Err(Error::Domain(format!("q = {q} must avoid 0 and ±1")));
        }
        let b = &q * &q;
        Ok(QParams { q, bp: BParams::new(b)? })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_rational(s)?)
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn b(&self) -> &Rational {
        self.bp.b()
    }

    pub fn bparams(&self) -> &BParams {
        &self.bp
    }

    /// `q^e` for any integer `e`.
    pub fn qpow(&self, e: i64) -> Rational {
        powi(&self.q, e)
    }
}
