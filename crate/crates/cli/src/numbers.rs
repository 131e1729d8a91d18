//! Exact numbers in JSON. Integers are plain numbers up to 2⁵³ in absolute
//! value and decimal strings beyond; rationals are always strings "p/q" (or
//! "p" when integral). Both integer forms are accepted on input.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const SAFE: i64 = 1 << 53;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct JsonInt(pub BigInt);

impl From<BigInt> for JsonInt {
    fn from(x: BigInt) -> Self {
        JsonInt(x)
    }
}

impl From<&BigInt> for JsonInt {
    fn from(x: &BigInt) -> Self {
        JsonInt(x.clone())
    }
}

impl From<i64> for JsonInt {
    fn from(x: i64) -> Self {
        JsonInt(x.into())
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.abs() <= BigInt::from(SAFE) {
            let v: i64 = (&self.0).try_into().expect("bounded by 2^53");
            s.serialize_i64(v)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

struct IntVisitor;

impl<'de> Visitor<'de> for IntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonInt, E> {
        Err(E::custom(format!("{v} is not an exact integer; use a string")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
        BigInt::from_str(v.trim())
            .map(JsonInt)
            .map_err(|_| E::custom(format!("{v:?} is not an integer")))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRat(pub BigRational);

impl From<BigRational> for JsonRat {
    fn from(x: BigRational) -> Self {
        JsonRat(x)
    }
}

impl From<&BigRational> for JsonRat {
    fn from(x: &BigRational) -> Self {
        JsonRat(x.clone())
    }
}

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct RatVisitor;

fn parse_rational(v: &str) -> Option<BigRational> {
    let v = v.trim();
    match v.split_once('/') {
        None => BigInt::from_str(v).ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
    }
}

impl<'de> Visitor<'de> for RatVisitor {
    type Value = JsonRat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<JsonRat, E> {
        Ok(JsonRat(BigRational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonRat, E> {
        Ok(JsonRat(BigRational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<JsonRat, E> {
        Err(E::custom(format!("{v} is not exact; write it as \"p/q\"")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonRat, E> {
        parse_rational(v)
            .map(JsonRat)
            .ok_or_else(|| E::custom(format!("{v:?} is not a rational number")))
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

pub fn ints(xs: &[BigInt]) -> Vec<JsonInt> {
    xs.iter().map(JsonInt::from).collect()
}

pub fn rats(xs: &[BigRational]) -> Vec<JsonRat> {
    xs.iter().map(JsonRat::from).collect()
}

pub fn unwrap_ints(xs: &[JsonInt]) -> Vec<BigInt> {
    xs.iter().map(|x| x.0.clone()).collect()
}

pub fn unwrap_rats(xs: &[JsonRat]) -> Vec<BigRational> {
    xs.iter().map(|x| x.0.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_integers_are_numbers() {
        assert_eq!(serde_json::to_string(&JsonInt::from(-42)).unwrap(), "-42");
        let big = JsonInt(BigInt::from(SAFE) + 1);
        assert_eq!(serde_json::to_string(&big).unwrap(), "\"9007199254740993\"");
        let back: JsonInt = serde_json::from_str("\"9007199254740993\"").unwrap();
        assert_eq!(back, big);
        let n: JsonInt = serde_json::from_str("7").unwrap();
        assert_eq!(n, JsonInt::from(7));
        assert!(serde_json::from_str::<JsonInt>("1.5").is_err());
        assert!(serde_json::from_str::<JsonInt>("\"x\"").is_err());
    }

    #[test]
    fn rationals_round_trip() {
        let r: JsonRat = serde_json::from_str("\"-6/4\"").unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-3/2\"");
        let r: JsonRat = serde_json::from_str("3").unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"3\"");
        assert!(serde_json::from_str::<JsonRat>("\"1/0\"").is_err());
        assert!(serde_json::from_str::<JsonRat>("0.5").is_err());
    }
}
