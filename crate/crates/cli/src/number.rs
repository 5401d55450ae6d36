//! JSON numbers written with 17 significant digits.

use serde::de::Deserializer;
use serde::ser::{Error as _, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use arlimit::Complex64;

/// A double serialized as `d.dddddddddddddddde±x` (17 significant digits,
/// lossless). Non-finite values serialize as `null` and read back as NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(S::Error::custom)?;
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(F17(Option::<f64>::deserialize(deserializer)?.unwrap_or(f64::NAN)))
    }
}

impl From<f64> for F17 {
    fn from(v: f64) -> Self {
        F17(v)
    }
}

/// Complex number as a `[re, im]` pair.
pub type ComplexOut = [F17; 2];

pub fn complex(z: Complex64) -> ComplexOut {
    [F17(z.re), F17(z.im)]
}

pub fn complexes(zs: &[Complex64]) -> Vec<ComplexOut> {
    zs.iter().map(|&z| complex(z)).collect()
}

pub fn reals(xs: &[f64]) -> Vec<F17> {
    xs.iter().map(|&x| F17(x)).collect()
}
