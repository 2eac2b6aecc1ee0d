//! Fixed number formatting shared by every serialized output.
//!
//! Floats are written with 17 significant digits in scientific notation so
//! that they round-trip exactly and identical runs produce identical bytes.

use serde::Serializer;
use serde_json::value::RawValue;

pub fn sig17(x: f64) -> String {
    if x == 0.0 {
        // collapse -0
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(&sig17(*x), s)
}

pub fn ser_f64x3<S: Serializer>(x: &[f64; 3], s: S) -> Result<S::Ok, S::Error> {
    raw(&array_text(x), s)
}

pub fn ser_opt_f64x3<S: Serializer>(x: &Option<[f64; 3]>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => raw(&array_text(v), s),
        None => s.serialize_none(),
    }
}

pub fn ser_f64_vec<S: Serializer>(x: &[f64], s: S) -> Result<S::Ok, S::Error> {
    raw(&array_text(x), s)
}

fn array_text(x: &[f64]) -> String {
    let parts: Vec<String> = x.iter().map(|&v| sig17(v)).collect();
    format!("[{}]", parts.join(","))
}

fn raw<S: Serializer>(text: &str, s: S) -> Result<S::Ok, S::Error> {
    let value = RawValue::from_string(text.to_owned()).map_err(serde::ser::Error::custom)?;
    serde::Serialize::serialize(&value, s)
}
