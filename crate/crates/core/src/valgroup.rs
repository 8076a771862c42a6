//! The value group `Q ∪ {∞}`.
//!
//! Every value handled by the engine (values of elements, augmentation
//! values, ε and δ invariants) lives here. Arithmetic is exact: rationals are
//! kept in lowest terms by `num_rational`, so structural equality is value
//! equality and `GValue` can be used directly as an ordered key.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number, always normalized (denominator > 0, lowest terms).
pub type Rat = BigRational;

/// Builds `num/den` in lowest terms. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `num/den`, or just `num` when the denominator is one.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a`, `-a` or `a/b` (sign on the numerator only).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = d.parse().map_err(|_| bad())?;
    if den.is_zero() || den.is_negative() || d.starts_with('+') {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// An element of `Q ∪ {∞}`.
///
/// The derived order puts every `Finite` below `Infinity` and compares
/// finite values as rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GValue {
    Finite(Rat),
    Infinity,
}

impl GValue {
    pub fn zero() -> Self {
        GValue::Finite(Rat::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GValue::Finite(rat(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            GValue::Finite(r) => Some(r),
            GValue::Infinity => None,
        }
    }

    /// `n · a`. A zero multiple is zero even for `∞` (the `0·γ` term of a
    /// digit expansion).
    ///
    /// Panics on a negative multiple of `∞`, which has no meaning in `Γ∞`.
    pub fn scale(&self, n: i64) -> GValue {
        match self {
            GValue::Finite(r) => GValue::Finite(r * rat_int(n)),
            GValue::Infinity if n > 0 => GValue::Infinity,
            GValue::Infinity if n == 0 => GValue::zero(),
            GValue::Infinity => panic!("negative multiple of infinity"),
        }
    }

    /// `a / b` for a positive integer `b`.
    pub fn div(&self, b: u64) -> Result<GValue> {
        if b == 0 {
            return Err(Error::ZeroDivisor);
        }
        match self {
            GValue::Finite(r) => Ok(GValue::Finite(r / Rat::from_integer(BigInt::from(b)))),
            GValue::Infinity => Err(Error::DivisionOfInfinity),
        }
    }

    /// `a − b` when both are finite; `∞ − finite = ∞`; `None` when `b = ∞`.
    pub fn checked_sub(&self, b: &GValue) -> Option<GValue> {
        match (self, b) {
            (_, GValue::Infinity) => None,
            (GValue::Infinity, _) => Some(GValue::Infinity),
            (GValue::Finite(x), GValue::Finite(y)) => Some(GValue::Finite(x - y)),
        }
    }

    pub fn min_of(a: GValue, b: GValue) -> GValue {
        std::cmp::min(a, b)
    }
}

/// `gv_add`: `∞` is absorbing.
impl Add for GValue {
    type Output = GValue;
    fn add(self, rhs: GValue) -> GValue {
        &self + &rhs
    }
}

impl<'a> Add<&'a GValue> for &'a GValue {
    type Output = GValue;
    fn add(self, rhs: &GValue) -> GValue {
        match (self, rhs) {
            (GValue::Finite(a), GValue::Finite(b)) => GValue::Finite(a + b),
            _ => GValue::Infinity,
        }
    }
}

impl From<Rat> for GValue {
    fn from(r: Rat) -> Self {
        GValue::Finite(r)
    }
}

impl PartialEq<Rat> for GValue {
    fn eq(&self, other: &Rat) -> bool {
        matches!(self, GValue::Finite(r) if r == other)
    }
}

impl PartialOrd<Rat> for GValue {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(match self {
            GValue::Finite(r) => r.cmp(other),
            GValue::Infinity => Ordering::Greater,
        })
    }
}

impl fmt::Display for GValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GValue::Finite(r) => f.write_str(&fmt_rat(r)),
            GValue::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for GValue {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(GValue::Infinity),
            other => parse_rat(other).map(GValue::Finite),
        }
    }
}

impl Serialize for GValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Largest of a nonempty collection; `None` for an empty one.
pub fn gv_max<I: IntoIterator<Item = GValue>>(it: I) -> Option<GValue> {
    it.into_iter().max()
}

pub fn gv_min<I: IntoIterator<Item = GValue>>(it: I) -> Option<GValue> {
    it.into_iter().min()
}
