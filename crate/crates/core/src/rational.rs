//! Exact rationals and rational vectors.
//!
//! `Rational` is `num_rational::BigRational`; it is always kept in lowest
//! terms with a positive denominator. The string form is `"p"` or `"p/q"`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"` (q nonzero). Whitespace around the parts is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::parse(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(p))
        }
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Canonical string: `"p"` when the denominator is one, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `1,2,-1/3`, optionally wrapped in parentheses or brackets, so
/// that [`format_vector`] output reads back.
pub fn parse_vector(s: &str) -> Result<Vec<Rational>> {
    let t = s.trim();
    let s = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .or_else(|| t.strip_prefix('[').and_then(|x| x.strip_suffix(']')))
        .unwrap_or(t);
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(","))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Positive multiple of `v` with coprime integer entries. The zero vector is
/// returned unchanged.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let scaled: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &scaled {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return scaled;
    }
    scaled.into_iter().map(|x| x / &g).collect()
}

pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    primitive_integer(v).into_iter().map(Rational::from_integer).collect()
}

/// Primitive integer vector whose first nonzero entry is positive. Used for
/// rows that only matter up to sign (lineality generators, equations).
pub fn sign_normalized(v: &[Rational]) -> Vec<Rational> {
    let mut p = primitive(v);
    if p.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut p {
            *x = -x.clone();
        }
    }
    p
}

pub fn scale(v: &[Rational], t: &Rational) -> Vec<Rational> {
    v.iter().map(|x| x * t).collect()
}

pub fn add_scaled(acc: &mut [Rational], v: &[Rational], t: &Rational) {
    if t.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += x * t;
        }
    }
}

pub fn to_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn from_strings(v: &[String]) -> Result<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s)).collect()
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of strings.
pub mod serde_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        from_strings(&v).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for a matrix of rationals.
pub mod serde_matrix {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|row| to_strings(row)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let m = Vec::<Vec<String>>::deserialize(d)?;
        m.iter()
            .map(|row| from_strings(row))
            .collect::<Result<_>>()
            .map_err(serde::de::Error::custom)
    }
}
