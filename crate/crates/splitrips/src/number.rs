//! Exact rational scalars, literal parsing and the lossy float snapping used by the
//! benchmark generator.
//!
//! All decomposition arithmetic runs on [`Rational`] so that the `<` versus `<=`
//! comparisons driving `σ`, `M` and the offending-edge tests are never perturbed by
//! rounding. Floats enter the crate only through [`snap_f64`], which rounds onto a
//! fixed decimal grid of spacing [`DEFAULT_EPSILON`] and is documented as lossy.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

/// Arbitrary precision rational number used for every distance and weight.
pub type Rational = BigRational;

/// Grid spacing used when floats are converted to rationals (`1e-9`).
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Builds the rational `n / 1`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the rational `p / q`.
///
/// # Panics
/// Panics when `q == 0`.
pub fn frac(p: i64, q: i64) -> Rational {
    assert!(q != 0, "zero denominator");
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// One half, used by the isolation index and the inverse circular formula.
pub fn half() -> Rational {
    frac(1, 2)
}

/// Parses a rational literal.
///
/// Accepted forms: integers (`"12"`), fractions (`"-3/4"`), decimals (`"0.125"`)
/// and decimals with an exponent (`"1.5e-3"`). Decimal forms are converted
/// exactly, so `"0.1"` is the rational `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty numeric literal".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_decimal(p.trim())?;
        let q = parse_decimal(q.trim())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(p / q);
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a number: `{s}`"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numerator: BigInt = if all_digits.is_empty() {
        BigInt::zero()
    } else {
        all_digits.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numerator);
    if scale >= 0 {
        value *= Rational::from_integer(num::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Lossy conversion of a float onto the decimal grid of spacing `epsilon`.
///
/// The result is the multiple of `epsilon` nearest to `value`. Every later
/// computation on the snapped value is exact, so sums of snapped values stay
/// additive.
///
/// # Panics
/// Panics when `value` is not finite or `epsilon` is not a positive power of ten
/// representable as `1 / 10^k`.
pub fn snap_f64(value: f64, epsilon: f64) -> Rational {
    assert!(value.is_finite(), "cannot snap a non-finite float");
    let digits = (-epsilon.log10()).round();
    assert!((0.0..=18.0).contains(&digits), "epsilon must be 1e-k with 0 <= k <= 18");
    let denom = 10i64.pow(digits as u32);
    let scaled = (value * denom as f64).round();
    Rational::new(BigInt::from(scaled as i128), BigInt::from(denom))
}

/// Converts a rational to the nearest `f64`.
pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY }
    })
}

/// Serde adapter that reads and writes a [`Rational`] as a `"p/q"` string.
///
/// Deserialization also accepts plain JSON numbers, which are converted through
/// their shortest decimal rendering (so `0.1` becomes `1/10`).
pub mod serde_rational {
    use super::{Rational, format_rational};
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    /// Serializes as a string.
    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    /// Deserializes from a string or a number.
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        super::value_to_rational(&v).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Vec<Rational>>`.
pub mod serde_rational_matrix {
    use super::{Rational, format_rational};
    use serde::de::Error as _;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    /// Serializes every entry as a `"p/q"` string.
    pub fn serialize<S: Serializer>(m: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(m.len()))?;
        for row in m {
            let row: Vec<String> = row.iter().map(format_rational).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }

    /// Deserializes entries given as strings or numbers.
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|v| super::value_to_rational(v).map_err(D::Error::custom))
                    .collect()
            })
            .collect()
    }
}

/// Converts a JSON scalar (string or number) to a rational.
pub fn value_to_rational(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational("-3/4").unwrap(), frac(-3, 4));
        assert_eq!(parse_rational("0.1").unwrap(), frac(1, 10));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("1.5e-3").unwrap(), frac(3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), int(200));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for q in [int(0), int(-7), frac(5, 3), frac(-1, 10)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
    }

    #[test]
    fn snapping_lands_on_the_grid() {
        let s = snap_f64(std::f64::consts::SQRT_2, DEFAULT_EPSILON);
        assert_eq!(s, frac(1_414_213_562, 1_000_000_000));
        assert!((to_f64(&s) - std::f64::consts::SQRT_2).abs() < 1e-9);
    }
}
