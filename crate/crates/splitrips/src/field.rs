//! Coefficient fields for homology: the rationals and prime fields `GF(p)`.

use crate::error::{Error, Result};
use crate::number::Rational;
use num::{One, Zero};
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Arithmetic of a coefficient field. Implementations are cheap to clone and carry
/// any runtime parameter (such as the characteristic).
pub trait Field: Clone + Send + Sync {
    /// Field elements.
    type E: Clone + PartialEq + fmt::Debug + Send + Sync;
    /// Additive identity.
    fn zero(&self) -> Self::E;
    /// Multiplicative identity.
    fn one(&self) -> Self::E;
    /// Image of an integer.
    fn from_i64(&self, v: i64) -> Self::E;
    /// `a + b`.
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - b`.
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a * b`.
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `-a`.
    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }
    /// `1 / a` for nonzero `a`.
    fn inv(&self, a: &Self::E) -> Self::E;
    /// True for the additive identity.
    fn is_zero(&self, a: &Self::E) -> bool;
}

/// The field of rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct RationalField;

impl Field for RationalField {
    type E = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        crate::number::int(v)
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.recip()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
}

/// The prime field `GF(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `GF(p)`; fails unless `p` is a prime below `2^31`.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::Parse(format!("{p} is not a prime below 2^31")));
        }
        Ok(Self { p })
    }

    /// The characteristic.
    pub fn p(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        let (mut base, mut exp, mut acc) = (*a % self.p, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Which coefficient field to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FieldTag {
    /// The rationals.
    #[default]
    Q,
    /// `GF(2)`.
    F2,
    /// `GF(p)` for a prime `p`.
    Fp(u64),
}

impl FieldTag {
    /// The prime field for `F2`/`Fp`, `None` for `Q`.
    pub fn prime(&self) -> Option<PrimeField> {
        match self {
            FieldTag::Q => None,
            FieldTag::F2 => Some(PrimeField { p: 2 }),
            FieldTag::Fp(p) => Some(PrimeField { p: *p }),
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::F2 => write!(f, "F2"),
            FieldTag::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = Error;
    /// Accepts `q`, `f2` and `fp:<p>` (case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "q" => Ok(FieldTag::Q),
            "f2" => Ok(FieldTag::F2),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown field `{s}`; use q, f2 or fp:<p>")))?;
                PrimeField::new(p)?;
                Ok(if p == 2 { FieldTag::F2 } else { FieldTag::Fp(p) })
            }
        }
    }
}

impl Serialize for FieldTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Runs `$body` with `$f` bound to the field selected by `$tag`.
#[macro_export]
macro_rules! with_field {
    ($tag:expr, $f:ident => $body:expr) => {
        match $tag.prime() {
            None => {
                let $f = $crate::field::RationalField;
                $body
            }
            Some(pf) => {
                let $f = pf;
                $body
            }
        }
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(&3, &f.inv(&3)), 1);
        assert_eq!(f.from_i64(-1), 6);
        assert!(PrimeField::new(9).is_err());
    }

    #[test]
    fn parses_tags() {
        assert_eq!("q".parse::<FieldTag>().unwrap(), FieldTag::Q);
        assert_eq!("F2".parse::<FieldTag>().unwrap(), FieldTag::F2);
        assert_eq!("fp:3".parse::<FieldTag>().unwrap(), FieldTag::Fp(3));
        assert_eq!("fp:2".parse::<FieldTag>().unwrap(), FieldTag::F2);
        assert!("fp:4".parse::<FieldTag>().is_err());
        assert!("z".parse::<FieldTag>().is_err());
    }
}
