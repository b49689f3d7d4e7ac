//! Extended non-negative distances.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A non-negative length that may be infinite.
///
/// Points in different components of a space sit at distance
/// [`ExtDistance::INFINITY`]; addition saturates there and the order is total.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtDistance(f64);

impl ExtDistance {
    pub const ZERO: ExtDistance = ExtDistance(0.0);
    pub const INFINITY: ExtDistance = ExtDistance(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidMetric(format!("distance {value} is not a non-negative number")));
        }
        Ok(ExtDistance(value))
    }

    /// Wraps a value already known to be valid.
    pub(crate) const fn raw(value: f64) -> Self {
        ExtDistance(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Strict comparison `self < r` against a real radius.
    pub fn lt(self, r: f64) -> bool {
        self.0 < r
    }

    pub fn le(self, r: f64) -> bool {
        self.0 <= r
    }
}

impl Eq for ExtDistance {}

impl PartialOrd for ExtDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for ExtDistance {
    type Output = ExtDistance;

    fn add(self, rhs: ExtDistance) -> ExtDistance {
        ExtDistance(self.0 + rhs.0)
    }
}

impl fmt::Display for ExtDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for ExtDistance {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            serializer.serialize_str("inf")
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for ExtDistance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(v) => ExtDistance::new(v).map_err(serde::de::Error::custom),
            Raw::Text(s) if s == "inf" => Ok(ExtDistance::INFINITY),
            Raw::Text(s) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        let d = ExtDistance::new(3.0).unwrap();
        assert_eq!(ExtDistance::INFINITY + d, ExtDistance::INFINITY);
        assert_eq!(d + ExtDistance::INFINITY, ExtDistance::INFINITY);
        assert!(d < ExtDistance::INFINITY);
    }

    #[test]
    fn rejects_negative_and_nan() {
        assert!(ExtDistance::new(-1.0).is_err());
        assert!(ExtDistance::new(f64::NAN).is_err());
    }

    #[test]
    fn json_uses_inf_literal() {
        let s = serde_json::to_string(&[ExtDistance::INFINITY, ExtDistance::new(1.5).unwrap()]).unwrap();
        assert_eq!(s, r#"["inf",1.5]"#);
        let back: Vec<ExtDistance> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0], ExtDistance::INFINITY);
    }
}
