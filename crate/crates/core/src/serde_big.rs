//! Serde helpers writing integers as JSON numbers when they fit in `i64`
//! and as decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Big(pub BigInt);

impl From<BigInt> for Big {
    fn from(x: BigInt) -> Self {
        Big(x)
    }
}

impl From<&BigInt> for Big {
    fn from(x: &BigInt) -> Self {
        Big(x.clone())
    }
}

impl fmt::Display for Big {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for Big {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Big {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Big;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Big, E> {
                Ok(Big(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Big, E> {
                Ok(Big(v.into()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Big, E> {
                Err(E::custom(format!("expected an integer, found {v}")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Big, E> {
                BigInt::from_str(v)
                    .map(Big)
                    .map_err(|_| E::custom(format!("invalid integer string {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    Big(x.clone()).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    Big::deserialize(d).map(|b| b.0)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<Big> = v.iter().cloned().map(Big).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<Big>::deserialize(d)?.into_iter().map(|b| b.0).collect())
    }
}

pub mod vec2 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<Vec<Big>> = v
            .iter()
            .map(|r| r.iter().cloned().map(Big).collect())
            .collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Vec<Big>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|b| b.0).collect())
            .collect())
    }
}
