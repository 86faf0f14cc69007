//! Serialization helpers and seeded randomness shared by several modules.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serializer};

/// The deterministic generator used by every sampled check.
pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrString {
    U(u64),
    I(i64),
    S(String),
}

/// Serializes a `BigUint` as a JSON number when it fits in `u64`, else as a
/// decimal string.
pub mod biguint_json {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match v.to_u64() {
            Some(x) => s.serialize_u64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        match NumOrString::deserialize(d)? {
            NumOrString::U(x) => Ok(BigUint::from(x)),
            NumOrString::I(x) => {
                u64::try_from(x).map(BigUint::from).map_err(serde::de::Error::custom)
            }
            NumOrString::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// `BigInt` counterpart of [`biguint_json`].
pub fn bigint_to_json(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::String(v.to_string()),
    }
}

pub fn bigint_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from).or_else(|| n.as_u64().map(BigInt::from)),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}
