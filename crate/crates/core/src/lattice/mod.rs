//! Exact integer and rational linear algebra, and lattices containing `Z^d`.
//!
//! Everything here is arbitrary precision. Lattices are always presented as
//! `N = Z^d + Z g_1 + ... + Z g_k` for rational generators `g_j`; other
//! lattices are rebased into this form by their users.

pub mod linalg;
pub mod matrix;
mod superlattice;

use std::fmt;
use std::ops::{Add, Deref, Index, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use matrix::{IntegerMatrix, SmithForm};
pub use superlattice::{BoxPoint, HermiteBasis, SuperLattice};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or `p`. Decimal points, exponents and zero denominators are
/// rejected, so every accepted string denotes exactly one rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("'{s}' is not an exact rational of the form p/q"));
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(t).map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            if q.starts_with(['-', '+']) {
                return Err(bad());
            }
            let q = parse_int(q)?;
            if q.is_zero() {
                return Err(Error::Parse(format!("'{s}' has a zero denominator")));
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Comma-separated list of exact rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty list".into()));
    }
    s.split(',').map(parse_rational).collect()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Least `q >= 1` with `q * x` integral.
pub fn index_of(x: &[Rational]) -> BigInt {
    lcm_of_denominators(x)
}

/// Smallest integer `>= r`.
pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Moves `r` into the half-open interval `(0, 1]` by an integer translation.
pub fn into_unit_interval(r: &Rational) -> Rational {
    r - Rational::from_integer(ceil(r)) + Rational::one()
}

/// A point of `Q^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        RationalVector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        entries.iter().map(|&e| int(e)).collect()
    }

    /// Standard basis vector `e_i` of `Q^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, c: &Rational) -> RationalVector {
        self.0.iter().map(|e| e * c).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|e| e.is_integer())
    }

    pub fn index(&self) -> BigInt {
        index_of(&self.0)
    }

    /// Smallest positive rational multiple with coprime integer entries.
    /// Returns the zero vector unchanged.
    pub fn primitive_integral(&self) -> RationalVector {
        if self.is_zero() {
            return self.clone();
        }
        let scaled: Vec<BigInt> = {
            let l = self.index();
            self.0
                .iter()
                .map(|e| (e * Rational::from_integer(l.clone())).to_integer())
                .collect()
        };
        let g = scaled.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
        scaled
            .into_iter()
            .map(|e| Rational::from_integer(e / &g))
            .collect()
    }

    /// True when `self = c * other` for some rational `c > 0`.
    pub fn is_positive_multiple_of(&self, other: &RationalVector) -> bool {
        self.ratio_to(other).is_some_and(|c| c.is_positive())
    }

    /// The scalar `c` with `self = c * other`, if any.
    pub fn ratio_to(&self, other: &RationalVector) -> Option<Rational> {
        if self.dim() != other.dim() || other.is_zero() {
            return None;
        }
        let pivot = other.0.iter().position(|e| !e.is_zero())?;
        let c = &self.0[pivot] / &other.0[pivot];
        (other.scale(&c) == *self).then_some(c)
    }
}

impl Deref for RationalVector {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

impl FromIterator<Rational> for RationalVector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        RationalVector(iter.into_iter().collect())
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;

    fn add(self, rhs: &RationalVector) -> RationalVector {
        self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect()
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;

    fn sub(self, rhs: &RationalVector) -> RationalVector {
        self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect()
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;

    fn neg(self) -> RationalVector {
        self.0.iter().map(|a| -a).collect()
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for RationalVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational_list(s).map(RationalVector)
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(ToString::to_string))
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<ExactScalar> = Vec::deserialize(deserializer)?;
        raw.into_iter()
            .map(|s| s.into_rational().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A serialized scalar: either an integer literal or a `p/q` string.
#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum ExactScalar {
    Int(i64),
    Text(String),
}

impl ExactScalar {
    pub(crate) fn into_rational(self) -> Result<Rational> {
        match self {
            ExactScalar::Int(n) => Ok(int(n)),
            ExactScalar::Text(s) => parse_rational(&s),
        }
    }
}
