//! Exact coefficient rings: the integers, the rationals and `Z/nZ`.
//!
//! Every value carries its ring so that mixing, say, a rational with a
//! residue class is caught at the operation that would combine them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch: {0} vs {1}")]
    Mismatch(RingSpec, RingSpec),
    #[error("malformed scalar literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("fraction `{0}` is not an element of {1}")]
    FractionNotAllowed(String, RingSpec),
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(BigInt),
    #[error("unknown ring `{0}` (expected Z, Q or Z/n)")]
    UnknownRing(String),
}

/// Which coefficient ring an element lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    Rationals,
    IntegersMod(BigInt),
}

impl RingSpec {
    pub fn integers_mod(n: impl Into<BigInt>) -> Result<Self, RingError> {
        let n = n.into();
        if n < BigInt::from(2) {
            return Err(RingError::BadModulus(n));
        }
        Ok(RingSpec::IntegersMod(n))
    }

    pub fn zero(&self) -> RingElem {
        self.from_int(0)
    }

    pub fn one(&self) -> RingElem {
        self.from_int(1)
    }

    /// Image of an integer under the canonical map `Z -> R`.
    pub fn from_int(&self, n: impl Into<BigInt>) -> RingElem {
        let n = n.into();
        let value = match self {
            RingSpec::Integers => Value::Int(n),
            RingSpec::Rationals => Value::Rat(BigRational::from_integer(n)),
            RingSpec::IntegersMod(m) => Value::Mod(n.mod_floor(m), m.clone()),
        };
        RingElem { value }
    }

    pub fn from_ratio(
        &self,
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
    ) -> Result<RingElem, RingError> {
        let (num, den) = (num.into(), den.into());
        let text = format!("{num}/{den}");
        if den.is_zero() {
            return Err(RingError::ZeroDenominator(text));
        }
        match self {
            RingSpec::Rationals => Ok(RingElem {
                value: Value::Rat(BigRational::new(num, den)),
            }),
            _ => Err(RingError::FractionNotAllowed(text, self.clone())),
        }
    }

    /// Parses a scalar literal: optional sign, digits, and `/digits` for
    /// the rationals. Both `-` and the unicode minus are accepted.
    pub fn parse_scalar(&self, text: &str) -> Result<RingElem, RingError> {
        let t = text.trim();
        let (negative, body) = match t.chars().next() {
            Some('-') => (true, &t[1..]),
            Some('\u{2212}') => (true, &t['\u{2212}'.len_utf8()..]),
            Some('+') => (false, &t[1..]),
            _ => (false, t),
        };
        let digits = |s: &str| -> Result<BigInt, RingError> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
                return Err(RingError::Malformed(text.to_string()));
            }
            Ok(s.parse::<BigInt>().expect("checked digits"))
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (digits(n)?, Some(digits(d)?)),
            None => (digits(body)?, None),
        };
        let num = if negative { -num } else { num };
        match den {
            None => Ok(self.from_int(num)),
            Some(den) => {
                if den.is_zero() {
                    return Err(RingError::ZeroDenominator(text.to_string()));
                }
                match self {
                    RingSpec::Rationals => self.from_ratio(num, den),
                    _ => Err(RingError::FractionNotAllowed(
                        text.to_string(),
                        self.clone(),
                    )),
                }
            }
        }
    }

    /// Nonzero elements used when a test or report needs "some r != 0":
    /// every nonzero residue for `Z/n` (n small), a fixed handful otherwise.
    pub fn sample_nonzero(&self) -> Vec<RingElem> {
        match self {
            RingSpec::IntegersMod(m) if *m <= BigInt::from(16) => {
                let m: u32 = m.try_into().expect("small modulus");
                (1..m).map(|i| self.from_int(i)).collect()
            }
            RingSpec::Rationals => {
                let mut v: Vec<RingElem> =
                    [1, -1, 2, 3].iter().map(|&i| self.from_int(i)).collect();
                v.push(self.from_ratio(1, 2).expect("nonzero denominator"));
                v
            }
            _ => [1, -1, 2, 3].iter().map(|&i| self.from_int(i)).collect(),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::IntegersMod(n) => write!(f, "Z/{n}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z" => Ok(RingSpec::Integers),
            "Q" => Ok(RingSpec::Rationals),
            other => {
                let n = other
                    .strip_prefix("Z/")
                    .and_then(|n| n.parse::<BigInt>().ok())
                    .ok_or_else(|| RingError::UnknownRing(other.to_string()))?;
                RingSpec::integers_mod(n)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Int(BigInt),
    Rat(BigRational),
    // residue in [0, modulus), modulus
    Mod(BigInt, BigInt),
}

/// An exact scalar in canonical form: reduced fraction for `Q`, least
/// nonnegative residue for `Z/n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    value: Value,
}

impl RingElem {
    pub fn spec(&self) -> RingSpec {
        match &self.value {
            Value::Int(_) => RingSpec::Integers,
            Value::Rat(_) => RingSpec::Rationals,
            Value::Mod(_, m) => RingSpec::IntegersMod(m.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Int(n) => n.is_zero(),
            Value::Rat(q) => q.is_zero(),
            Value::Mod(r, _) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Int(n) => n.is_one(),
            Value::Rat(q) => q.is_one(),
            Value::Mod(r, _) => r.is_one(),
        }
    }

    /// True when the canonical representative is negative (never for `Z/n`).
    pub fn is_negative(&self) -> bool {
        match &self.value {
            Value::Int(n) => n.is_negative(),
            Value::Rat(q) => q.is_negative(),
            Value::Mod(..) => false,
        }
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem, RingError> {
        let value = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a + b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Mod(a, m), Value::Mod(b, n)) if m == n => {
                Value::Mod((a + b).mod_floor(m), m.clone())
            }
            _ => return Err(RingError::Mismatch(self.spec(), other.spec())),
        };
        Ok(RingElem { value })
    }

    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem, RingError> {
        let value = match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a * b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Mod(a, m), Value::Mod(b, n)) if m == n => {
                Value::Mod((a * b).mod_floor(m), m.clone())
            }
            _ => return Err(RingError::Mismatch(self.spec(), other.spec())),
        };
        Ok(RingElem { value })
    }

    pub fn neg(&self) -> RingElem {
        let value = match &self.value {
            Value::Int(a) => Value::Int(-a),
            Value::Rat(a) => Value::Rat(-a),
            Value::Mod(a, m) => Value::Mod((-a).mod_floor(m), m.clone()),
        };
        RingElem { value }
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem, RingError> {
        self.try_add(&other.neg())
    }

    /// Absolute value of the canonical representative; used for printing signs.
    pub fn abs(&self) -> RingElem {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Rational value of an element of `Z` or `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.value {
            Value::Int(n) => Some(BigRational::from_integer(n.clone())),
            Value::Rat(q) => Some(q.clone()),
            Value::Mod(..) => None,
        }
    }
}

// Operator forms panic on mismatched rings.
impl std::ops::Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.try_add(rhs).expect("ring mismatch in addition")
    }
}

impl std::ops::Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self.try_sub(rhs).expect("ring mismatch in subtraction")
    }
}

impl std::ops::Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.try_mul(rhs).expect("ring mismatch in multiplication")
    }
}

impl std::ops::Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem::neg(self)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Int(n) => write!(f, "{n}"),
            Value::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Value::Mod(r, _) => write!(f, "{r}"),
        }
    }
}

impl Serialize for RingSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for RingElem {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
