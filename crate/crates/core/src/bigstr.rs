//! Serde adapters that write big integers as decimal strings.

use num_bigint::BigUint;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_str_radix(10))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    let text = String::deserialize(d)?;
    BigUint::parse_bytes(text.as_bytes(), 10)
        .ok_or_else(|| D::Error::custom(format!("not a decimal integer: {text:?}")))
}

/// `i128` as a plain JSON number; buffered (tagged or flattened) serde
/// content cannot carry 128-bit integers.
pub mod narrow {
    use serde::{de::Error as _, ser::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &i128, s: S) -> Result<S::Ok, S::Error> {
        let v = i64::try_from(*value).map_err(|_| S::Error::custom(format!("{value} exceeds 64 bits")))?;
        s.serialize_i64(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i128, D::Error> {
        i64::deserialize(d).map(i128::from).map_err(D::Error::custom)
    }
}
