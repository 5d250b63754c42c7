//! Exact value types shared by every other module: rationals, the pair
//! `(D^k, Σ α_i D^{k-i})`, extended partitions labelling jet-space orbits,
//! and minimal log discrepancy values.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num::{BigInt, BigRational, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{reject, Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if s.contains('/') {
            return Err(Error::Parse(format!("malformed rational '{s}'")));
        }
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("malformed decimal '{s}'")));
        }
        let numer: BigInt = digits.parse().map_err(|_| Error::Parse(s.to_string()))?;
        let denom = num::pow(BigInt::from(10), frac.len());
        let value = Rational::new(numer, denom);
        return Ok(if negative { -value } else { value });
    }
    let value = Rational::from_str(s).map_err(|_| Error::Parse(format!("malformed rational '{s}'")))?;
    Ok(value)
}

/// Serde adapter writing a rational as the string `"p/q"` (or `"p"`).
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(de::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(de::Error::custom))
            .collect()
    }
}

/// An element of `ℕ ∪ {∞}`. `Inf` is greater than every finite value and
/// absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Inf,
}

impl Order {
    pub fn is_finite(self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Inf => None,
        }
    }

    pub fn scale(self, factor: u64) -> Order {
        match self {
            Order::Finite(n) => Order::Finite(n * factor),
            Order::Inf if factor == 0 => Order::Finite(0),
            Order::Inf => Order::Inf,
        }
    }

    pub fn is_positive(self) -> bool {
        self != Order::Finite(0)
    }
}

impl Add for Order {
    type Output = Order;

    fn add(self, rhs: Order) -> Order {
        match (self, rhs) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a + b),
            _ => Order::Inf,
        }
    }
}

impl std::iter::Sum for Order {
    fn sum<I: Iterator<Item = Order>>(iter: I) -> Order {
        iter.fold(Order::Finite(0), Add::add)
    }
}

impl From<u64> for Order {
    fn from(n: u64) -> Self {
        Order::Finite(n)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for Order {
    type Err = Error;

    fn from_str(s: &str) -> Result<Order> {
        match s.trim() {
            "inf" | "INF" | "Inf" | "∞" => Ok(Order::Inf),
            t => t
                .parse::<u64>()
                .map(Order::Finite)
                .map_err(|_| Error::Parse(format!("expected a natural number or 'inf', got '{t}'"))),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u64(*n),
            Order::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Order, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Order::Finite(n)),
            Raw::Text(t) => t.parse().map_err(de::Error::custom),
        }
    }
}

/// A nonincreasing tuple over `ℕ ∪ {∞}`; the orbit `C_λ` of the diagonal arc
/// `diag(t^{λ_1}, …, t^{λ_m})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Order>", into = "Vec<Order>")]
pub struct ExtendedPartition {
    entries: Vec<Order>,
}

impl ExtendedPartition {
    pub fn new(entries: Vec<Order>) -> Result<Self> {
        if let Some(pos) = entries.windows(2).position(|w| w[0] < w[1]) {
            reject!(
                "extended partition must be nonincreasing, but entry {} ({}) < entry {} ({})",
                pos + 1,
                entries[pos],
                pos + 2,
                entries[pos + 1]
            );
        }
        Ok(ExtendedPartition { entries })
    }

    pub fn from_finite(values: &[u64]) -> Result<Self> {
        Self::new(values.iter().copied().map(Order::Finite).collect())
    }

    /// `inf_prefix` copies of `Inf` followed by `tail`.
    pub fn with_infinite_prefix(inf_prefix: usize, tail: &[u64]) -> Result<Self> {
        let mut entries = vec![Order::Inf; inf_prefix];
        entries.extend(tail.iter().copied().map(Order::Finite));
        Self::new(entries)
    }

    pub fn entries(&self) -> &[Order] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 1-based access matching the usual `λ_i` indexing.
    pub fn part(&self, i: usize) -> Order {
        self.entries[i - 1]
    }
}

impl TryFrom<Vec<Order>> for ExtendedPartition {
    type Error = Error;

    fn try_from(entries: Vec<Order>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<ExtendedPartition> for Vec<Order> {
    fn from(p: ExtendedPartition) -> Self {
        p.entries
    }
}

impl FromStr for ExtendedPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Order>>>()?;
        Self::new(entries)
    }
}

impl fmt::Display for ExtendedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// The pair `(D^k, Σ_{i=1}^k α_i D^{k-i})` inside `m × m` matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeterminantalPair {
    m: usize,
    k: usize,
    #[serde(with = "serde_rational_vec")]
    alphas: Vec<Rational>,
}

impl DeterminantalPair {
    /// Validates `1 ≤ k ≤ m` and right-pads `alphas` with zeros to length `k`.
    pub fn new(m: usize, k: usize, alphas: Vec<Rational>) -> Result<Self> {
        if m == 0 {
            reject!("matrix size m must be positive");
        }
        if k < 1 {
            reject!("rank bound k must be at least 1 (D^0 is a point)");
        }
        if k > m {
            reject!("rank bound k = {k} exceeds matrix size m = {m}");
        }
        if alphas.len() > k {
            reject!("{} coefficients given but the pair only has k = {k}", alphas.len());
        }
        let mut alphas = alphas;
        alphas.resize(k, Rational::zero());
        Ok(DeterminantalPair { m, k, alphas })
    }

    /// The pair with all coefficients zero, i.e. the variety `D^k` alone.
    pub fn bare(m: usize, k: usize) -> Result<Self> {
        Self::new(m, k, Vec::new())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alphas
    }

    /// `α_i`, 1-based.
    pub fn alpha(&self, i: usize) -> &Rational {
        &self.alphas[i - 1]
    }

    /// `dim D^k = k(2m - k)`.
    pub fn dimension(&self) -> usize {
        self.k * (2 * self.m - self.k)
    }
}

/// Either a finite rational or `-∞`; `NegInfinity` sorts below every finite
/// value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MldValue {
    NegInfinity,
    Finite(Rational),
}

impl MldValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, MldValue::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            MldValue::Finite(r) => Some(r),
            MldValue::NegInfinity => None,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        MldValue::Finite(integer(n))
    }
}

impl fmt::Display for MldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MldValue::NegInfinity => f.write_str("-inf"),
            MldValue::Finite(r) => write!(f, "{r}"),
        }
    }
}

impl FromStr for MldValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" => Ok(MldValue::NegInfinity),
            t => parse_rational(t).map(MldValue::Finite),
        }
    }
}

impl Serialize for MldValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MldValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(de::Error::custom)
    }
}
