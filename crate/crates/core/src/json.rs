//! Serde adapters for exact numbers. Integers are written as JSON integers
//! when they fit in 64 bits and as decimal strings otherwise; rationals are
//! written as integers when integral and as `"p/q"` strings otherwise.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::matrix::{IntMatrix, Matrix, RatMatrix};

pub fn int_to_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn int_from_value(v: &Value) -> Result<BigInt, String> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| format!("non-integer number {n}")),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|e| format!("{s:?}: {e}")),
        other => Err(format!("expected integer, got {other}")),
    }
}

pub fn rat_to_value(x: &BigRational) -> Value {
    if x.is_integer() {
        int_to_value(x.numer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn rat_from_value(v: &Value) -> Result<BigRational, String> {
    match v {
        Value::String(s) if s.contains('/') => {
            let (p, q) = s.split_once('/').unwrap();
            let p = BigInt::from_str(p.trim()).map_err(|e| format!("{s:?}: {e}"))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| format!("{s:?}: {e}"))?;
            if q == BigInt::from(0) {
                return Err(format!("{s:?}: zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
        other => int_from_value(other).map(BigRational::from_integer),
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        int_to_value(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        int_from_value(&Value::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub mod bigints {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(int_to_value).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Value>::deserialize(d)?
            .iter()
            .map(int_from_value)
            .collect::<Result<_, _>>()
            .map_err(D::Error::custom)
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        rat_to_value(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        rat_from_value(&Value::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub mod rationals {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(rat_to_value).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<Value>::deserialize(d)?
            .iter()
            .map(rat_from_value)
            .collect::<Result<_, _>>()
            .map_err(D::Error::custom)
    }
}

/// Integer matrix as nested arrays.
pub mod int_matrix {
    use super::*;

    pub fn to_value(m: &IntMatrix) -> Value {
        Value::Array(
            (0..m.rows())
                .map(|i| Value::Array(m.row(i).iter().map(int_to_value).collect()))
                .collect(),
        )
    }

    pub fn from_value(v: &Value, cols_hint: usize) -> Result<IntMatrix, String> {
        let rows = v.as_array().ok_or("matrix must be an array of rows")?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| "matrix row must be an array".to_string())?
                    .iter()
                    .map(int_from_value)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parsed.is_empty() {
            return Ok(Matrix::empty(0, cols_hint));
        }
        Matrix::from_rows(parsed).map_err(|e| e.to_string())
    }

    pub fn serialize<S: Serializer>(m: &IntMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_value(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<IntMatrix, D::Error> {
        from_value(&Value::deserialize(d)?, 0).map_err(D::Error::custom)
    }
}

/// Rational matrix as nested arrays of integers or `"p/q"` strings.
pub mod rat_matrix {
    use super::*;

    pub fn to_value(m: &RatMatrix) -> Value {
        Value::Array(
            (0..m.rows())
                .map(|i| Value::Array(m.row(i).iter().map(rat_to_value).collect()))
                .collect(),
        )
    }

    pub fn from_value(v: &Value) -> Result<RatMatrix, String> {
        let rows = v.as_array().ok_or("matrix must be an array of rows")?;
        let parsed = rows
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| "matrix row must be an array".to_string())?
                    .iter()
                    .map(rat_from_value)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Matrix::from_rows(parsed).map_err(|e| e.to_string())
    }

    pub fn serialize<S: Serializer>(m: &RatMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_value(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<RatMatrix, D::Error> {
        from_value(&Value::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    rat_from_value(&Value::String(s.to_string())).ok()
}
