//! Text output with twelve significant digits.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Version of the JSON documents written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

/// Nearest double to `x` rounded to 12 significant decimal digits.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Number with at most 12 significant digits, plain notation for
/// exponents in `[-5, 12)` and scientific notation otherwise.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round_sig12(x);
    if r == 0.0 {
        return "0".into();
    }
    let exp = r.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round_sig12(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Compact single-line JSON with rounded floats.
pub fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))?;
    round_value(&mut v);
    serde_json::to_string(&v).map_err(|e| Error::Numerical(format!("serialization failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(round_sig12(0.572265184458568447), 0.572265184459);
        assert_eq!(fmt_g(0.572265184458568447), "0.572265184459");
        assert_eq!(fmt_g(500.0), "500");
        assert_eq!(fmt_g(1e20), "1e20");
        assert_eq!(fmt_g(-2.5e-7), "-2.5e-7");
        assert_eq!(fmt_g(123456789012.0), "123456789012");
        assert_eq!(fmt_g(1234567890123.0), "1.23456789012e12");
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
    }

    #[test]
    fn json_rounds_floats_only() {
        #[derive(Serialize)]
        struct Doc {
            n: u64,
            x: f64,
            v: Vec<f64>,
            missing: f64,
        }
        let s = to_json_line(&Doc { n: 12345678901234, x: 2.0 / 3.0, v: vec![1e-20 / 3.0], missing: f64::NAN }).unwrap();
        assert_eq!(s, r#"{"missing":null,"n":12345678901234,"v":[3.33333333333e-21],"x":0.666666666667}"#);
    }
}
