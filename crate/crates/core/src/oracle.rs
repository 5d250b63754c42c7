//! Brute-force cross-checks for the closed forms.
//!
//! The first oracle minimizes `codim - n - Σ α_i w_i` over orbit tails by
//! exhaustive enumeration. The second computes the `t`-order of an ideal of
//! minors along an arc directly, by expanding every minor of the arc matrix as
//! a truncated power series.

use num::{BigInt, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{reject, Result};
use crate::linalg;
use crate::mld::{beta_coefficients, mld_along, mld_at_rank};
use crate::orbit::{
    contact_order_subvariety, nash_contact_order, orbit_codim, orbit_codim_point, orbit_has_finite_codim,
    orbit_in_jet_space, orbit_meets_point_fiber,
};
use crate::pairs::{integer, serde_rational, DeterminantalPair, ExtendedPartition, MldValue, Order, Rational};
use crate::poly::{MinorMemo, TruncatedSeries};

/// Where the mld is taken: at a matrix of rank `q`, or along `D^{k-j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    Point { q: usize },
    Locus { j: usize },
}

impl Target {
    fn validate(self, pair: &DeterminantalPair) -> Result<()> {
        match self {
            Target::Point { q } if q > pair.k() => reject!("point rank q = {q} exceeds k = {}", pair.k()),
            Target::Locus { j } if j < 1 || j > pair.k() => {
                reject!("locus index j = {j} outside 1..={}", pair.k())
            }
            _ => Ok(()),
        }
    }

    /// Number of leading prefix sums of β that must stay nonnegative for the
    /// objective to be bounded below.
    fn prefix_len(self, pair: &DeterminantalPair) -> usize {
        match self {
            Target::Point { q } => pair.k() - q,
            Target::Locus { .. } => pair.k(),
        }
    }
}

/// `codim - n - Σ α_i w_i` for the orbit `C_λ` and the given target.
pub fn em_objective(pair: &DeterminantalPair, lambda: &ExtendedPartition, target: Target) -> Result<Rational> {
    target.validate(pair)?;
    if !orbit_in_jet_space(lambda, pair)? || !orbit_has_finite_codim(lambda, pair)? {
        reject!("orbit {lambda} needs m-k leading inf entries followed by finite ones");
    }
    let codim = match target {
        Target::Point { q } => {
            if !orbit_meets_point_fiber(lambda, pair, q)? {
                reject!("orbit {lambda} does not meet the arcs through a rank-{q} point");
            }
            orbit_codim_point(lambda, pair, q)?
        }
        Target::Locus { j } => {
            let start = pair.m() - pair.k();
            if let Some(pos) = (1..=j).find(|&i| !lambda.part(start + i).is_positive()) {
                reject!("orbit {lambda} does not meet D^(k-{j}): λ_{} is 0", start + pos);
            }
            orbit_codim(lambda, pair)?
        }
    };
    let finite = |o: Order| o.finite().expect("finite once the codimension is");
    let mut value = integer(codim as i64) - integer(finite(nash_contact_order(lambda, pair)?) as i64);
    for i in 1..=pair.k() {
        let w = finite(contact_order_subvariety(lambda, pair, i)?);
        value -= pair.alpha(i) * integer(w as i64);
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    /// `-inf` when the prefix-sum certificate fires, otherwise the search
    /// minimum.
    pub minimum: MldValue,
    /// Finite tail `(λ_{m-k+1}, …, λ_m)` of the first minimizer found.
    pub argmin: Vec<u64>,
    /// Smallest objective value among the visited tails.
    #[serde(with = "serde_rational")]
    pub search_minimum: Rational,
    /// The argmin has an entry equal to `L`, so the search window may be
    /// hiding smaller values.
    pub at_boundary: bool,
    /// Some required prefix sum `β_1 + … + β_j` is negative, which certifies
    /// that the infimum over nonincreasing tails is `-inf`.
    pub prefix_unbounded: bool,
    /// Number of tails evaluated.
    pub visited: u64,
}

/// Calls `f` on every nonincreasing tuple of length `len` with entries in
/// `[lo_i, hi]`, where `lo_i = 1` for `i < positive` and `0` otherwise, in
/// lexicographically descending order.
fn for_each_tail(len: usize, positive: usize, hi: u64, f: &mut impl FnMut(&[u64])) {
    fn rec(buf: &mut Vec<u64>, len: usize, positive: usize, cap: u64, f: &mut impl FnMut(&[u64])) {
        let i = buf.len();
        if i == len {
            f(buf);
            return;
        }
        let lo = u64::from(i < positive);
        if cap < lo {
            return;
        }
        for v in (lo..=cap).rev() {
            buf.push(v);
            rec(buf, len, positive, v, f);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(len);
    rec(&mut buf, len, positive, hi, f);
}

/// Closed-form count of the tails visited by [`minimize_em_objective`].
pub fn expected_tail_count(k: usize, target: Target, bound: u64) -> u64 {
    let l = bound;
    match target {
        Target::Point { q } => binomial(l + (k - q) as u64 - 1, (k - q) as u64),
        Target::Locus { j } => binomial(l + k as u64, k as u64) - binomial(l + j as u64 - 1, j as u64 - 1),
    }
}

fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn minimize_em_objective(pair: &DeterminantalPair, target: Target, bound: u64) -> Result<OracleResult> {
    if bound < 1 {
        reject!("search bound L must be at least 1");
    }
    target.validate(pair)?;
    let (m, k) = (pair.m(), pair.k());
    let betas = beta_coefficients(pair, k)?;
    let prefix_unbounded = betas.prefix_sums()[..target.prefix_len(pair)].iter().any(|p| p.is_negative());

    // the objective is affine in the tail: offset + Σ β_j λ_{m-k+j}
    let (len, positive, offset) = match target {
        Target::Point { q } => (k - q, k - q, integer((q * (2 * m - q)) as i64)),
        Target::Locus { j } => (k, j, Rational::zero()),
    };
    let beta = &betas.as_slice()[..len];
    let mut best: Option<(Rational, Vec<u64>)> = None;
    let mut visited = 0u64;
    for_each_tail(len, positive, bound, &mut |tail| {
        visited += 1;
        let mut value = offset.clone();
        for (b, &x) in beta.iter().zip(tail) {
            if x > 0 {
                value += b * Rational::from_integer(BigInt::from(x));
            }
        }
        if best.as_ref().is_none_or(|(v, _)| value < *v) {
            best = Some((value, tail.to_vec()));
        }
    });
    let (search_minimum, mut argmin) = best.expect("every target admits at least one tail when L ≥ 1");
    argmin.resize(k, 0);
    let at_boundary = argmin.contains(&bound);
    let minimum = if prefix_unbounded { MldValue::NegInfinity } else { MldValue::Finite(search_minimum.clone()) };
    Ok(OracleResult { minimum, argmin, search_minimum, at_boundary, prefix_unbounded, visited })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub oracle: OracleResult,
    pub closed_form: MldValue,
    pub agree: bool,
}

pub fn mld_via_oracle(pair: &DeterminantalPair, target: Target, bound: u64) -> Result<OracleComparison> {
    let oracle = minimize_em_objective(pair, target, bound)?;
    let closed_form = match target {
        Target::Point { q } => mld_at_rank(pair, q)?,
        Target::Locus { j } => mld_along(pair, j)?,
    };
    let agree = oracle.minimum == closed_form;
    Ok(OracleComparison { oracle, closed_form, agree })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncatedOrder {
    Finite(u64),
    AboveTruncation,
}

/// How the arc matrix is built from `diag(t^{λ_1}, …, t^{λ_m})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcMode {
    Diagonal,
    /// `G · diag · H` with invertible integer `G`, `H` drawn from the seed.
    Conjugated(u64),
}

fn random_invertible(m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    loop {
        let g: Vec<Vec<i64>> = (0..m).map(|_| (0..m).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let rows: Vec<Vec<Rational>> = g.iter().map(|r| r.iter().map(|&x| integer(x)).collect()).collect();
        if linalg::rank(&rows) == m {
            return g;
        }
    }
}

/// Minimum `t`-order of the `s × s` minors of the arc `diag(t^λ)` (possibly
/// conjugated), computed modulo `t^{N+1}`. Infinite entries of `λ` become the
/// exponent `N + 1`.
pub fn ord_ideal_powerseries(lambda: &ExtendedPartition, s: usize, n: usize, mode: ArcMode) -> Result<TruncatedOrder> {
    let m = lambda.len();
    if s < 1 || s > m {
        reject!("minor size s = {s} outside 1..={m}");
    }
    let finite_sum: u64 = lambda.entries().iter().filter_map(|o| o.finite()).sum();
    if (n as u64) < finite_sum {
        reject!("truncation N = {n} is below the sum {finite_sum} of the finite entries");
    }
    let exponents: Vec<usize> = lambda.entries().iter().map(|o| o.finite().map_or(n + 1, |e| e as usize)).collect();
    let (g, h) = match mode {
        ArcMode::Diagonal => {
            let id: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect();
            (id.clone(), id)
        }
        ArcMode::Conjugated(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_invertible(m, &mut rng);
            (g, random_invertible(m, &mut rng))
        }
    };
    // entry (a, b) = Σ_i G[a][i] H[i][b] t^{λ_i}
    let entries: Vec<Vec<TruncatedSeries>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    let mut s = TruncatedSeries::zero(n);
                    for (i, &e) in exponents.iter().enumerate() {
                        let c = g[a][i] * h[i][b];
                        if c != 0 && e <= n {
                            s = &s + &TruncatedSeries::monomial(n, e, integer(c));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let mut memo = MinorMemo::new(entries);
    let subsets: Vec<Vec<usize>> = itertools::Itertools::combinations(0..m, s).collect();
    let mut best: Option<usize> = None;
    for rows in &subsets {
        for cols in &subsets {
            if let Some(o) = memo.minor(rows, cols).order() {
                best = Some(best.map_or(o, |b| b.min(o)));
                if o == 0 {
                    return Ok(TruncatedOrder::Finite(0));
                }
            }
        }
    }
    Ok(best.map_or(TruncatedOrder::AboveTruncation, |o| TruncatedOrder::Finite(o as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::rational;
    use proptest::prelude::*;

    fn pair(m: usize, k: usize, alphas: Vec<Rational>) -> DeterminantalPair {
        DeterminantalPair::new(m, k, alphas).unwrap()
    }

    fn tail(m: usize, k: usize, t: &[u64]) -> ExtendedPartition {
        ExtendedPartition::with_infinite_prefix(m - k, t).unwrap()
    }

    #[test]
    fn objective_examples() {
        let p = pair(3, 2, vec![]);
        assert_eq!(em_objective(&p, &tail(3, 2, &[1, 1]), Target::Point { q: 0 }).unwrap(), integer(6));
        assert_eq!(em_objective(&p, &tail(3, 2, &[1, 0]), Target::Locus { j: 1 }).unwrap(), integer(2));
        let p = pair(2, 1, vec![]);
        assert_eq!(em_objective(&p, &tail(2, 1, &[1]), Target::Point { q: 0 }).unwrap(), integer(2));
        // point membership: q = 0 needs a positive tail
        assert!(em_objective(&pair(3, 2, vec![]), &tail(3, 2, &[1, 0]), Target::Point { q: 0 }).is_err());
        assert!(em_objective(&pair(3, 2, vec![]), &tail(3, 2, &[0, 0]), Target::Locus { j: 1 }).is_err());
        let inf = ExtendedPartition::new(vec![Order::Inf, Order::Inf, Order::Finite(0)]).unwrap();
        assert!(em_objective(&pair(3, 2, vec![]), &inf, Target::Locus { j: 1 }).is_err());
    }

    #[test]
    fn minimize_examples() {
        let r = minimize_em_objective(&pair(3, 2, vec![]), Target::Point { q: 0 }, 3).unwrap();
        assert_eq!((r.minimum.clone(), r.argmin.clone(), r.at_boundary), (MldValue::from_integer(6), vec![1, 1], false));

        let r = minimize_em_objective(&pair(3, 2, vec![rational(5, 2), integer(0)]), Target::Point { q: 0 }, 8).unwrap();
        assert!(r.prefix_unbounded);
        assert_eq!(r.minimum, MldValue::NegInfinity);

        let r = minimize_em_objective(&pair(2, 1, vec![]), Target::Locus { j: 1 }, 3).unwrap();
        assert_eq!((r.minimum, r.argmin), (MldValue::from_integer(2), vec![1]));

        assert!(minimize_em_objective(&pair(2, 1, vec![]), Target::Locus { j: 1 }, 0).is_err());
    }

    #[test]
    fn oracle_comparison_examples() {
        let c = mld_via_oracle(&pair(4, 2, vec![]), Target::Point { q: 1 }, 3).unwrap();
        assert!(c.agree);
        assert_eq!(c.closed_form, MldValue::from_integer(10));

        let c = mld_via_oracle(&pair(3, 2, vec![integer(1), rational(7, 2)]), Target::Point { q: 0 }, 6).unwrap();
        assert_eq!(c.closed_form, MldValue::NegInfinity);
        assert_eq!(c.oracle.minimum, MldValue::Finite(rational(1, 2)));
        assert_eq!(c.oracle.argmin, vec![1, 1]);
        assert!(!c.oracle.at_boundary && !c.oracle.prefix_unbounded && !c.agree);

        let c = mld_via_oracle(&pair(2, 2, vec![]), Target::Point { q: 0 }, 2).unwrap();
        assert!(c.agree);
        assert_eq!(c.closed_form, MldValue::from_integer(4));
    }

    /// The objective must decompose into the orbit-calculus pieces.
    #[test]
    fn search_values_match_objective() {
        let p = pair(4, 3, vec![rational(1, 2), integer(2), rational(3, 4)]);
        for target in [Target::Point { q: 1 }, Target::Locus { j: 2 }] {
            let r = minimize_em_objective(&p, target, 3).unwrap();
            let mut full = r.argmin.clone();
            full.sort_unstable_by(|a, b| b.cmp(a));
            let direct = em_objective(&p, &tail(4, 3, &full), target).unwrap();
            assert_eq!(direct, r.search_minimum);
        }
    }

    #[test]
    fn closed_form_agreement_for_zero_alpha() {
        for m in 1..=6 {
            for k in 1..=m {
                for q in 0..=k {
                    let c = mld_via_oracle(&pair(m, k, vec![]), Target::Point { q }, 2).unwrap();
                    assert!(c.agree, "m={m} k={k} q={q}");
                }
            }
        }
    }

    fn recursive_count(len: usize, positive: usize, cap: u64, at: usize) -> u64 {
        if at == len {
            return 1;
        }
        let lo = u64::from(at < positive);
        (lo..=cap).map(|v| recursive_count(len, positive, v, at + 1)).sum()
    }

    #[test]
    fn tail_counts() {
        for k in 1..=5 {
            for l in 1..=4 {
                for q in 0..=k {
                    let r = minimize_em_objective(&pair(5, k, vec![]), Target::Point { q }, l).unwrap();
                    assert_eq!(r.visited, expected_tail_count(k, Target::Point { q }, l));
                    assert_eq!(r.visited, recursive_count(k - q, k - q, l, 0));
                }
                for j in 1..=k {
                    let r = minimize_em_objective(&pair(5, k, vec![]), Target::Locus { j }, l).unwrap();
                    assert_eq!(r.visited, expected_tail_count(k, Target::Locus { j }, l));
                    assert_eq!(r.visited, recursive_count(k, j, l, 0));
                }
            }
        }
    }

    #[test]
    fn powerseries_examples() {
        let l = ExtendedPartition::from_finite(&[2, 1]).unwrap();
        assert_eq!(ord_ideal_powerseries(&l, 2, 10, ArcMode::Diagonal).unwrap(), TruncatedOrder::Finite(3));
        assert_eq!(ord_ideal_powerseries(&l, 1, 10, ArcMode::Diagonal).unwrap(), TruncatedOrder::Finite(1));
        let z = ExtendedPartition::from_finite(&[0, 0, 0]).unwrap();
        assert_eq!(ord_ideal_powerseries(&z, 2, 5, ArcMode::Diagonal).unwrap(), TruncatedOrder::Finite(0));
        let inf = ExtendedPartition::new(vec![Order::Inf, Order::Finite(1)]).unwrap();
        assert_eq!(ord_ideal_powerseries(&inf, 2, 4, ArcMode::Diagonal).unwrap(), TruncatedOrder::AboveTruncation);
        assert_eq!(ord_ideal_powerseries(&inf, 1, 4, ArcMode::Conjugated(3)).unwrap(), TruncatedOrder::Finite(1));
        assert!(ord_ideal_powerseries(&l, 3, 10, ArcMode::Diagonal).is_err());
        assert!(ord_ideal_powerseries(&l, 1, 2, ArcMode::Diagonal).is_err());
    }

    proptest! {
        #[test]
        fn conjugation_keeps_orders(mut v in proptest::collection::vec(0u64..=3, 1..=3), s_seed in 0usize..3, seed in 0u64..1000) {
            v.sort_unstable_by(|a, b| b.cmp(a));
            let m = v.len();
            let s = 1 + s_seed % m;
            let l = ExtendedPartition::from_finite(&v).unwrap();
            let n = v.iter().sum::<u64>() as usize;
            let expected: u64 = v[m - s..].iter().sum();
            prop_assert_eq!(ord_ideal_powerseries(&l, s, n, ArcMode::Conjugated(seed)).unwrap(), TruncatedOrder::Finite(expected));
        }

        #[test]
        fn minimum_is_all_ones_when_betas_nonnegative(m in 1usize..=5, k_seed in 0usize..5, q_seed in 0usize..6, a in proptest::collection::vec(0i64..=12, 5)) {
            let k = 1 + k_seed % m;
            let q = q_seed % (k + 1);
            let p = pair(m, k, a[..k].iter().map(|&x| rational(x, 4)).collect());
            let betas = beta_coefficients(&p, k - q).unwrap();
            prop_assume!(betas.all_nonnegative());
            let c = mld_via_oracle(&p, Target::Point { q }, 2).unwrap();
            prop_assert!(c.agree);
        }
    }
}
