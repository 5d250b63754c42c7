//! Closed forms for minimal log discrepancies of `(D^k, Σ α_i D^{k-i})` at
//! points of each rank and along the determinantal strata.
//!
//! Everything is driven by the coefficients
//! `β_j = (m - k) + (2j - 1) - (α_1 + … + α_j)`: `β_j` is the weight of
//! `λ_{m-k+j}` in the jet-space objective, the pair is log canonical exactly
//! when the relevant `β_j` are nonnegative, and the mld is the objective at
//! the all-ones tail.

use num::{Signed, Zero};
use serde::Serialize;

use crate::error::{reject, Result};
use crate::pairs::{integer, serde_rational, serde_rational_vec, DeterminantalPair, MldValue, Rational};

/// `(β_1, …, β_count)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BetaVector(#[serde(with = "serde_rational_vec")] pub Vec<Rational>);

impl BetaVector {
    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `β_1 + … + β_j` for `j = 1..=len`.
    pub fn prefix_sums(&self) -> Vec<Rational> {
        self.0
            .iter()
            .scan(Rational::zero(), |acc, b| {
                *acc += b;
                Some(acc.clone())
            })
            .collect()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.0.iter().all(|b| !b.is_negative())
    }
}

pub fn beta_coefficients(pair: &DeterminantalPair, count: usize) -> Result<BetaVector> {
    if count > pair.k() {
        reject!("asked for {count} β-coefficients but k = {}", pair.k());
    }
    let base = integer((pair.m() - pair.k()) as i64);
    let mut alpha_sum = Rational::zero();
    let betas = (1..=count)
        .map(|j| {
            alpha_sum += pair.alpha(j);
            &base + integer(2 * j as i64 - 1) - &alpha_sum
        })
        .collect();
    Ok(BetaVector(betas))
}

/// The first failing inequality `α_1 + … + α_j ≤ m - k + (2j - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LcViolation {
    pub j: usize,
    #[serde(with = "serde_rational")]
    pub alpha_sum: Rational,
    #[serde(with = "serde_rational")]
    pub bound: Rational,
}

fn first_violation(pair: &DeterminantalPair, count: usize) -> Result<Option<LcViolation>> {
    let betas = beta_coefficients(pair, count)?;
    let violation = betas.as_slice().iter().position(|b| b.is_negative()).map(|idx| {
        let j = idx + 1;
        let alpha_sum: Rational = pair.alphas()[..j].iter().sum();
        LcViolation { j, alpha_sum, bound: integer((pair.m() - pair.k() + 2 * j - 1) as i64) }
    });
    Ok(violation)
}

fn check_rank(pair: &DeterminantalPair, q: usize) -> Result<()> {
    if q > pair.k() {
        reject!("point rank q = {q} exceeds k = {}", pair.k());
    }
    Ok(())
}

fn check_locus(pair: &DeterminantalPair, j: usize) -> Result<()> {
    if j < 1 || j > pair.k() {
        reject!("locus index j = {j} outside 1..={} (the locus is D^(k-j))", pair.k());
    }
    Ok(())
}

pub fn lc_violation_at_rank(pair: &DeterminantalPair, q: usize) -> Result<Option<LcViolation>> {
    check_rank(pair, q)?;
    first_violation(pair, pair.k() - q)
}

/// Log canonical at a rank-`q` matrix: `β_j ≥ 0` for `j = 1..=k-q`. Vacuous
/// when `q = k`.
pub fn is_lc_at_rank(pair: &DeterminantalPair, q: usize) -> Result<bool> {
    Ok(lc_violation_at_rank(pair, q)?.is_none())
}

/// `q(m-k) + km - Σ_{i=1}^{k-q} (k-q-i+1) α_i`, or `-∞` when the pair is not
/// log canonical there.
pub fn mld_at_rank(pair: &DeterminantalPair, q: usize) -> Result<MldValue> {
    if !is_lc_at_rank(pair, q)? {
        return Ok(MldValue::NegInfinity);
    }
    let (m, k) = (pair.m() as i64, pair.k() as i64);
    let qi = q as i64;
    let mut value = integer(qi * (m - k) + k * m);
    for i in 1..=(pair.k() - q) {
        value -= integer(k - qi - i as i64 + 1) * pair.alpha(i);
    }
    Ok(MldValue::Finite(value))
}

pub fn lc_violation_along(pair: &DeterminantalPair, j: usize) -> Result<Option<LcViolation>> {
    check_locus(pair, j)?;
    first_violation(pair, pair.k())
}

/// Log canonical along `D^{k-j}`: the inequalities for every prefix length
/// `1..=k`, independent of `j`.
pub fn is_lc_along(pair: &DeterminantalPair, j: usize) -> Result<bool> {
    Ok(lc_violation_along(pair, j)?.is_none())
}

/// `j(m-k+j) - Σ_{i=1}^{j} (j-i+1) α_i`, or `-∞`.
pub fn mld_along(pair: &DeterminantalPair, j: usize) -> Result<MldValue> {
    if !is_lc_along(pair, j)? {
        return Ok(MldValue::NegInfinity);
    }
    let (m, k) = (pair.m() as i64, pair.k() as i64);
    let ji = j as i64;
    let mut value = integer(ji * (m - k + ji));
    for i in 1..=j {
        value -= integer(ji - i as i64 + 1) * pair.alpha(i);
    }
    Ok(MldValue::Finite(value))
}

/// `D^k` is terminal: smooth when `k = m`, otherwise the mld along the
/// singular locus `D^{k-1}` must exceed 1.
pub fn is_terminal(m: usize, k: usize) -> Result<bool> {
    let pair = DeterminantalPair::bare(m, k)?;
    if k == m {
        return Ok(true);
    }
    Ok(mld_along(&pair, 1)? > MldValue::from_integer(1))
}

/// mld at `x_q` for `q = 0..=k`, with the consecutive differences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemicontinuityProfile {
    pub values: Vec<MldValue>,
    /// `mld(x_q) - mld(x_{q-1})` for `q = 1..=k` when both are finite.
    pub differences: Vec<Option<String>>,
    /// `(m - k) + α_1 + … + α_{k-q+1}` for `q = 1..=k`.
    #[serde(with = "serde_rational_vec")]
    pub expected_differences: Vec<Rational>,
    /// Every finite difference matches its expected value, and no finite
    /// value is followed by `-inf`.
    pub holds: bool,
    /// Every finite difference is positive. Fails for `k = m` with
    /// `α_1 = 0`, where the top two ranks share the value `m²`.
    pub strictly_increasing: bool,
}

/// Requires nonnegative coefficients.
pub fn semicontinuity_profile(pair: &DeterminantalPair) -> Result<SemicontinuityProfile> {
    if let Some(i) = pair.alphas().iter().position(|a| a.is_negative()) {
        reject!("semicontinuity needs nonnegative coefficients, but α_{} = {}", i + 1, pair.alphas()[i]);
    }
    let k = pair.k();
    let values = (0..=k).map(|q| mld_at_rank(pair, q)).collect::<Result<Vec<_>>>()?;
    let mut differences = Vec::with_capacity(k);
    let mut expected_differences = Vec::with_capacity(k);
    let mut holds = true;
    let mut strictly_increasing = true;
    for q in 1..=k {
        let expected: Rational =
            integer((pair.m() - k) as i64) + pair.alphas()[..k - q + 1].iter().sum::<Rational>();
        let diff = match (&values[q], &values[q - 1]) {
            (MldValue::Finite(hi), MldValue::Finite(lo)) => Some(hi - lo),
            _ => None,
        };
        if let Some(d) = &diff {
            holds &= *d == expected;
            strictly_increasing &= d.is_positive();
        }
        // once a value is finite, every higher rank must be finite too
        if values[q - 1].is_finite() && !values[q].is_finite() {
            holds = false;
        }
        differences.push(diff.map(|d| d.to_string()));
        expected_differences.push(expected);
    }
    Ok(SemicontinuityProfile { values, differences, expected_differences, holds, strictly_increasing })
}
