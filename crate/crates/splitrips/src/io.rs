//! Reading and writing distance matrices as CSV or JSON.
//!
//! CSV input is a square table of numbers with an optional header row. JSON input is
//! `{"n": 3, "d": [[...], ...]}` or a bare array of rows. Entries may be integers,
//! decimals, exponent forms or `"p/q"` strings.

use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use crate::number::{DEFAULT_EPSILON, Rational, format_rational, parse_rational, snap_f64, value_to_rational};
use serde_json::{Value, json};
use std::path::Path;

/// File format of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    /// Comma-separated values.
    Csv,
    /// JSON object or array.
    Json,
}

impl Format {
    /// Guesses the format from a file extension (`.json` is JSON, anything else CSV).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// How numeric literals become rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NumericMode {
    /// Every literal is converted exactly.
    Exact,
    /// Decimal and exponent literals are snapped to the `1e-9` grid; `"p/q"` stays exact.
    #[default]
    Float,
}

fn convert(text: &str, mode: NumericMode) -> Result<Rational> {
    let t = text.trim();
    match mode {
        NumericMode::Float if !t.contains('/') => {
            let v: f64 = t.parse().map_err(|_| Error::Parse(format!("not a number: `{t}`")))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("non-finite entry `{t}`")));
            }
            Ok(snap_f64(v, DEFAULT_EPSILON))
        }
        _ => parse_rational(t),
    }
}

/// Parses CSV text into a validated metric.
pub fn parse_csv(text: &str, mode: NumericMode) -> Result<DistanceMatrix> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut rows: Vec<Vec<String>> = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push(rec.iter().map(str::to_owned).collect());
    }
    if let Some(first) = rows.first()
        && first.iter().any(|c| convert(c, mode).is_err())
    {
        rows.remove(0);
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|c| convert(c, mode)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    DistanceMatrix::checked(rows)
}

/// Parses JSON text into a validated metric.
pub fn parse_json(text: &str, mode: NumericMode) -> Result<DistanceMatrix> {
    let v: Value = serde_json::from_str(text)?;
    let (rows, n) = match &v {
        Value::Array(rows) => (rows, None),
        Value::Object(obj) => {
            let rows = obj
                .get("d")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Structural("JSON matrix needs a `d` array".into()))?;
            (rows, obj.get("n").and_then(Value::as_u64))
        }
        _ => return Err(Error::Structural("JSON matrix must be an object or an array".into())),
    };
    if let Some(n) = n
        && n as usize != rows.len()
    {
        return Err(Error::Structural(format!("`n` = {n} but `d` has {} rows", rows.len())));
    }
    let cell = |c: &Value| match (c, mode) {
        (Value::Number(x), NumericMode::Float) => convert(&x.to_string(), mode),
        (Value::String(s), _) => convert(s, mode),
        _ => value_to_rational(c),
    };
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Structural("each row must be an array".into()))?
                .iter()
                .map(cell)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    DistanceMatrix::checked(rows)
}

/// Parses text in the given format.
pub fn parse_matrix(text: &str, format: Format, mode: NumericMode) -> Result<DistanceMatrix> {
    match format {
        Format::Csv => parse_csv(text, mode),
        Format::Json => parse_json(text, mode),
    }
}

/// Reads a matrix file; the format defaults to the one implied by the extension.
pub fn read_matrix(path: &Path, format: Option<Format>, mode: NumericMode) -> Result<DistanceMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text, format.unwrap_or_else(|| Format::from_path(path)), mode)
}

/// CSV rendering with `"p/q"` entries and no header.
pub fn to_csv(m: &DistanceMatrix) -> String {
    m.rows()
        .iter()
        .map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

/// JSON rendering `{"n": n, "d": [[...]]}` with `"p/q"` entries.
pub fn to_json(m: &DistanceMatrix) -> Value {
    json!({
        "n": m.n(),
        "d": m.rows().iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Parses a 1-based cyclic order such as `"1,3,2,4"` into 0-based indices.
pub fn parse_order(text: &str, n: usize) -> Result<Vec<usize>> {
    let order = text
        .split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| {
            let k: usize = s.trim().parse().map_err(|_| Error::Parse(format!("bad order entry `{s}`")))?;
            if k == 0 || k > n {
                return Err(Error::Parse(format!("order entry {k} outside 1..={n}")));
            }
            Ok(k - 1)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut seen = order.clone();
    seen.sort_unstable();
    seen.dedup();
    if order.len() != n || seen.len() != n {
        return Err(Error::Parse(format!("order must list each of 1..={n} exactly once")));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::number::{frac, int};

    #[test]
    fn csv_round_trip_with_and_without_header() {
        let m = fixtures::hexagon();
        let text = to_csv(&m);
        assert_eq!(parse_csv(&text, NumericMode::Exact).unwrap(), m);
        let with_header = format!("a,b,c,d,e,f\n{text}");
        assert_eq!(parse_csv(&with_header, NumericMode::Float).unwrap(), m);
    }

    #[test]
    fn json_forms() {
        let m = parse_json(r#"{"n": 2, "d": [[0, "1/3"], ["1/3", 0]]}"#, NumericMode::Float).unwrap();
        assert_eq!(m.get(0, 1), &frac(1, 3));
        let m = parse_json("[[0, 0.1], [0.1, 0]]", NumericMode::Exact).unwrap();
        assert_eq!(m.get(0, 1), &frac(1, 10));
        let back = parse_json(&to_json(&fixtures::seven_point()).to_string(), NumericMode::Exact).unwrap();
        assert_eq!(back, fixtures::seven_point());
        assert!(parse_json(r#"{"n": 3, "d": [[0]]}"#, NumericMode::Exact).is_err());
    }

    #[test]
    fn float_mode_snaps_long_decimals() {
        let m = parse_csv("0,0.1234567891234\n0.1234567891234,0\n", NumericMode::Float).unwrap();
        assert_eq!(m.get(0, 1), &frac(123456789, 1_000_000_000));
        let exact = parse_csv("0,0.1234567891234\n0.1234567891234,0\n", NumericMode::Exact).unwrap();
        assert_ne!(exact.get(0, 1), m.get(0, 1));
    }

    #[test]
    fn invalid_metrics_are_rejected() {
        let err = parse_csv("0,1\n2,0\n", NumericMode::Exact).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(parse_csv("0,1\n1,0", NumericMode::Exact).unwrap().get(1, 0), &int(1));
    }

    #[test]
    fn orders() {
        assert_eq!(parse_order("2,1,3", 3).unwrap(), vec![1, 0, 2]);
        assert!(parse_order("1,1,3", 3).is_err());
        assert!(parse_order("1,2", 3).is_err());
    }
}
