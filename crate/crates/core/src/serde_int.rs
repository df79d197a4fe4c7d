//! Serde helpers for arbitrary-precision integers.
//!
//! Values that fit in an `i64` are written as JSON numbers, larger ones as
//! decimal strings. Both forms are accepted on input.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserializer, Serialize, Serializer};

#[derive(Serialize)]
#[serde(untagged)]
enum Wire<'a> {
    Small(i64),
    Big(&'a str),
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => Wire::Small(v).serialize(s),
        None => Wire::Big(&x.to_string()).serialize(s),
    }
}

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<BigInt, E> {
        if v.fract() == 0.0 && v.abs() < 9.0e15 {
            Ok(BigInt::from(v as i64))
        } else {
            Err(E::custom(format!("expected an integer, found {v}")))
        }
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        BigInt::from_str(v.trim()).map_err(|_| E::custom(format!("invalid integer {v:?}")))
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    d.deserialize_any(IntVisitor)
}

#[derive(Serialize, serde::Deserialize)]
#[serde(transparent)]
struct Wrapped(#[serde(with = "crate::serde_int")] BigInt);

pub mod vec {
    use super::*;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| Wrapped(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<Wrapped>::deserialize(d)?
            .into_iter()
            .map(|w| w.0)
            .collect())
    }
}

pub mod matrix {
    use super::*;
    use crate::linalg::IntMatrix;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Wrapped>> = m
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(Wrapped).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        let rows = Vec::<Vec<Wrapped>>::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(de::Error::custom("matrix rows have different lengths"));
        }
        let n = rows.len();
        let entries = rows.into_iter().flatten().map(|w| w.0).collect();
        Ok(IntMatrix::from_vec(n, cols, entries))
    }
}

impl serde::Serialize for crate::linalg::IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        matrix::serialize(self, s)
    }
}

impl<'de> serde::Deserialize<'de> for crate::linalg::IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        matrix::deserialize(d)
    }
}
