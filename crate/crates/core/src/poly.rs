//! Sparse polynomials with rational coefficients in the `m²` entries of a
//! generic square matrix, plus minors and truncated power series in `t`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{reject, Error, Result};
use crate::pairs::{serde_rational, Rational};

/// Exponent vector of length `m²`, row-major: `x_{ij}` is slot `(i-1)m + (j-1)`.
pub type Exponent = Vec<u32>;

/// 0-based slot of `x_{ij}` (1-based `i`, `j`).
pub fn var_index(m: usize, i: usize, j: usize) -> usize {
    (i - 1) * m + (j - 1)
}

/// Inverse of [`var_index`]: 1-based `(i, j)`.
pub fn var_position(m: usize, idx: usize) -> (usize, usize) {
    (idx / m + 1, idx % m + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    m: usize,
    terms: BTreeMap<Exponent, Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    NotHomogeneous,
}

impl MultiPoly {
    pub fn zero(m: usize) -> Self {
        MultiPoly { m, terms: BTreeMap::new() }
    }

    pub fn constant(m: usize, c: Rational) -> Self {
        let mut p = Self::zero(m);
        p.add_term(vec![0; m * m], c);
        p
    }

    pub fn one(m: usize) -> Self {
        Self::constant(m, Rational::one())
    }

    /// `x_{ij}` with 1-based indices.
    pub fn var(m: usize, i: usize, j: usize) -> Result<Self> {
        if i < 1 || j < 1 || i > m || j > m {
            reject!("variable x_({i},{j}) outside a {m}x{m} matrix");
        }
        let mut exp = vec![0; m * m];
        exp[var_index(m, i, j)] = 1;
        Ok(Self::monomial(m, exp, Rational::one()))
    }

    pub fn monomial(m: usize, exp: Exponent, coef: Rational) -> Self {
        let mut p = Self::zero(m);
        p.add_term(exp, coef);
        p
    }

    /// Builds from raw terms, merging duplicates and dropping zeros.
    pub fn from_terms(m: usize, terms: impl IntoIterator<Item = (Exponent, Rational)>) -> Result<Self> {
        let mut p = Self::zero(m);
        for (exp, coef) in terms {
            if exp.len() != m * m {
                reject!("exponent vector of length {} for m = {m} (expected {})", exp.len(), m * m);
            }
            p.add_term(exp, coef);
        }
        Ok(p)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, Rational> {
        self.terms
    }

    /// Number of terms. Emptiness is `is_zero`.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, exp: Exponent, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coef);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_layout(&self, other: &MultiPoly) -> Result<()> {
        if self.m != other.m {
            return Err(Error::Invalid(format!(
                "variable layout mismatch: polynomials over {}x{} and {}x{} matrices",
                self.m, self.m, other.m, other.m
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_layout(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_layout(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.same_layout(other)?;
        let mut out = MultiPoly::zero(self.m);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exp, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scalar_mul(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.m);
        }
        MultiPoly { m: self.m, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.m);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let Some(first) = degrees.next() else {
            return Homogeneity::Zero;
        };
        if degrees.all(|d| d == first) {
            Homogeneity::Degree(first)
        } else {
            Homogeneity::NotHomogeneous
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// `∂/∂x` for the variable in slot `idx`.
    pub fn derivative(&self, idx: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.m);
        for (e, c) in &self.terms {
            if e[idx] > 0 {
                let mut exp = e.clone();
                exp[idx] -= 1;
                out.add_term(exp, c * Rational::from_integer(e[idx].into()));
            }
        }
        out
    }

    /// Value at a point given row-major as `m²` rationals.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.m * self.m {
            reject!("evaluation point has {} coordinates, expected {}", point.len(), self.m * self.m);
        }
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &p) in point.iter().zip(e) {
                if p > 0 {
                    term *= num::pow(x.clone(), p as usize);
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Splits by bicontent: the multiset of row indices and of column indices
    /// used by a monomial, as count vectors of length `m`.
    pub fn split_by_bicontent(&self) -> BTreeMap<Bicontent, MultiPoly> {
        let mut parts: BTreeMap<Bicontent, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            parts
                .entry(monomial_bicontent(self.m, e))
                .or_insert_with(|| MultiPoly::zero(self.m))
                .add_term(e.clone(), c.clone());
        }
        parts
    }

    /// Multiplies every coefficient so the result has integer coefficients
    /// with gcd 1 and a positive leading coefficient; zero stays zero.
    pub fn primitive_part(&self) -> MultiPoly {
        let Some((_, lead)) = self.terms.iter().next_back() else {
            return self.clone();
        };
        let mut lcm_den = num::BigInt::one();
        let mut gcd_num = num::BigInt::zero();
        for c in self.terms.values() {
            lcm_den = num::integer::lcm(lcm_den, c.denom().clone());
            gcd_num = num::integer::gcd(gcd_num, c.numer().clone());
        }
        let mut scale = Rational::new(lcm_den, gcd_num);
        if lead.is_negative() {
            scale = -scale;
        }
        self.scalar_mul(&scale)
    }

    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.terms.iter().map(|(e, c)| JsonTerm { exp: e.clone(), coef: c.clone() }).collect()
    }

    pub fn from_json_terms(m: usize, terms: Vec<JsonTerm>) -> Result<Self> {
        Self::from_terms(m, terms.into_iter().map(|t| (t.exp, t.coef)))
    }
}

/// Row counts and column counts of a monomial.
pub type Bicontent = (Vec<u32>, Vec<u32>);

pub fn monomial_bicontent(m: usize, exp: &[u32]) -> Bicontent {
    let mut rows = vec![0; m];
    let mut cols = vec![0; m];
    for (idx, &p) in exp.iter().enumerate() {
        if p > 0 {
            let (i, j) = var_position(m, idx);
            rows[i - 1] += p;
            cols[j - 1] += p;
        }
    }
    (rows, cols)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub exp: Exponent,
    #[serde(with = "serde_rational")]
    pub coef: Rational,
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(e, c)| JsonTerm { exp: e.clone(), coef: c.clone() }))
    }
}

impl<'a> Add for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("polynomial layout mismatch")
    }
}

impl<'a> Sub for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("polynomial layout mismatch")
    }
}

impl<'a> Mul for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("polynomial layout mismatch")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { m: self.m, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest monomial first
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_const = e.iter().all(|&p| p == 0);
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
                if !is_const {
                    f.write_str("*")?;
                }
            }
            let mut first = true;
            for (idx, &p) in e.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                let (i, j) = var_position(self.m, idx);
                if self.m < 10 {
                    write!(f, "x{i}{j}")?;
                } else {
                    write!(f, "x{i}_{j}")?;
                }
                if p > 1 {
                    write!(f, "^{p}")?;
                }
            }
        }
        Ok(())
    }
}

/// Sorted row and column sets of a square submatrix, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinorIndex {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MinorIndex {
    /// Sorts its inputs; rejects repeated indices and unequal sizes.
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>, m: usize) -> Result<Self> {
        if rows.len() != cols.len() {
            reject!("minor needs as many rows as columns ({} vs {})", rows.len(), cols.len());
        }
        rows.sort_unstable();
        cols.sort_unstable();
        for set in [&rows, &cols] {
            if set.windows(2).any(|w| w[0] == w[1]) {
                reject!("repeated index in minor {set:?}");
            }
            if set.iter().any(|&x| x < 1 || x > m) {
                reject!("minor index outside 1..={m}: {set:?}");
            }
        }
        Ok(MinorIndex { rows, cols })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// The operations the memoized Laplace expansion needs.
pub(crate) trait Ring: Clone {
    fn ring_zero(&self) -> Self;
    fn ring_one(&self) -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_is_zero(&self) -> bool;
}

impl Ring for MultiPoly {
    fn ring_zero(&self) -> Self {
        MultiPoly::zero(self.m)
    }
    fn ring_one(&self) -> Self {
        MultiPoly::one(self.m)
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

/// Determinants of submatrices of a fixed matrix, memoized on
/// (row set, column set) bitmasks. Expands along the first selected row.
pub(crate) struct MinorMemo<T: Ring> {
    entries: Vec<Vec<T>>,
    memo: HashMap<(u64, u64), T>,
}

impl<T: Ring> MinorMemo<T> {
    pub(crate) fn new(entries: Vec<Vec<T>>) -> Self {
        assert!(entries.len() <= 64, "bitmask memo supports at most 64 rows");
        MinorMemo { entries, memo: HashMap::new() }
    }

    /// 0-based sorted index lists.
    pub(crate) fn minor(&mut self, rows: &[usize], cols: &[usize]) -> T {
        let rmask = rows.iter().fold(0u64, |a, &r| a | 1 << r);
        let cmask = cols.iter().fold(0u64, |a, &c| a | 1 << c);
        self.minor_mask(rmask, cmask)
    }

    fn minor_mask(&mut self, rmask: u64, cmask: u64) -> T {
        if rmask == 0 {
            return self.entries[0][0].ring_one();
        }
        if let Some(v) = self.memo.get(&(rmask, cmask)) {
            return v.clone();
        }
        let r = rmask.trailing_zeros() as usize;
        let rest = rmask & !(1 << r);
        let mut acc = self.entries[0][0].ring_zero();
        let mut cm = cmask;
        let mut position = 0;
        while cm != 0 {
            let c = cm.trailing_zeros() as usize;
            cm &= cm - 1;
            let entry = self.entries[r][c].clone();
            if !entry.ring_is_zero() {
                let sub = self.minor_mask(rest, cmask & !(1 << c));
                let term = entry.ring_mul(&sub);
                acc = if position % 2 == 0 { acc.ring_add(&term) } else { acc.ring_sub(&term) };
            }
            position += 1;
        }
        self.memo.insert((rmask, cmask), acc.clone());
        acc
    }
}

/// Cache of minors of the generic `m × m` matrix.
pub struct MinorCache {
    m: usize,
    inner: MinorMemo<MultiPoly>,
}

impl MinorCache {
    pub fn new(m: usize) -> Self {
        let entries = (1..=m)
            .map(|i| (1..=m).map(|j| MultiPoly::var(m, i, j).expect("in range")).collect())
            .collect();
        MinorCache { m, inner: MinorMemo::new(entries) }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&mut self, idx: &MinorIndex) -> MultiPoly {
        let rows: Vec<usize> = idx.rows().iter().map(|r| r - 1).collect();
        let cols: Vec<usize> = idx.cols().iter().map(|c| c - 1).collect();
        self.inner.minor(&rows, &cols)
    }
}

/// The determinant of the submatrix of the generic matrix on `idx`.
pub fn minor_poly(idx: &MinorIndex, m: usize) -> Result<MultiPoly> {
    if idx.rows().iter().chain(idx.cols()).any(|&x| x > m) {
        reject!("minor {:?}x{:?} does not fit in a {m}x{m} matrix", idx.rows(), idx.cols());
    }
    Ok(MinorCache::new(m).get(idx))
}

/// A power series in `t` modulo `t^{N+1}`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(n: usize) -> Self {
        TruncatedSeries { coeffs: vec![Rational::zero(); n + 1] }
    }

    /// `c·t^e`, which is zero when `e > N`.
    pub fn monomial(n: usize, e: usize, c: Rational) -> Self {
        let mut s = Self::zero(n);
        if e <= n {
            s.coeffs[e] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            reject!("a truncated series needs at least one coefficient");
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `t`-adic order, or `None` when the series vanishes modulo `t^{N+1}`.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "truncation mismatch");
    }
}

impl Ring for TruncatedSeries {
    fn ring_zero(&self) -> Self {
        Self::zero(self.truncation())
    }
    fn ring_one(&self) -> Self {
        Self::monomial(self.truncation(), 0, Rational::one())
    }
    fn ring_add(&self, o: &Self) -> Self {
        self.check(o);
        TruncatedSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self.check(o);
        TruncatedSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self.check(o);
        let n = self.truncation();
        let mut out = Self::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl<'a> Mul for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
        self.ring_mul(rhs)
    }
}

impl<'a> Add for &'a TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &'a TruncatedSeries) -> TruncatedSeries {
        self.ring_add(rhs)
    }
}

/// Evaluates `p` at an `m × m` matrix of series, modulo `t^{N+1}`.
pub fn substitute_series(p: &MultiPoly, assignment: &[Vec<TruncatedSeries>], n: usize) -> Result<TruncatedSeries> {
    let m = p.m();
    if assignment.len() != m || assignment.iter().any(|row| row.len() != m) {
        reject!("assignment must be a {m}x{m} matrix of series");
    }
    if let Some(bad) = assignment.iter().flatten().find(|s| s.truncation() != n) {
        reject!("series truncated at t^{} but N = {n}", bad.truncation() + 1);
    }
    let mut powers: HashMap<(usize, u32), TruncatedSeries> = HashMap::new();
    let mut total = TruncatedSeries::zero(n);
    for (e, c) in p.terms() {
        let mut term = TruncatedSeries::monomial(n, 0, c.clone());
        for (idx, &pw) in e.iter().enumerate() {
            if pw == 0 {
                continue;
            }
            let (i, j) = var_position(m, idx);
            let power = powers
                .entry((idx, pw))
                .or_insert_with(|| {
                    let base = &assignment[i - 1][j - 1];
                    (1..pw).fold(base.clone(), |acc, _| &acc * base)
                })
                .clone();
            term = &term * &power;
            if term.is_zero() {
                break;
            }
        }
        total = &total + &term;
    }
    Ok(total)
}
