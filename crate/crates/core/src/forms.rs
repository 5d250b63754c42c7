//! Differential forms on `D^k`: differentials of minors, the chart
//! description of the canonical generator `w`, and the reduction of a top
//! form `dx_{v_1} ∧ … ∧ dx_{v_D}` to `F · w`.
//!
//! On the chart where the `k × k` minor `Δ = Δ_{IJ}` is invertible,
//! `w = ± Δ^{-(m-k)} ∧_{S_IJ} dx`, with `S_IJ` the entries in a row of `I` or
//! a column of `J`. A differential `dx_{ij}` with `i ∉ I`, `j ∉ J` is removed
//! using `d` of the `(k+1) × (k+1)` minor on rows `I ∪ {i}`, columns
//! `J ∪ {j}`, which vanishes on `D^k`. Every identity is checked after
//! clearing powers of `Δ`, with equality modulo `I_{k+1}` decided through the
//! standard basis.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{reject, Error, Result};
use crate::pairs::{integer, Rational};
use crate::poly::{var_index, var_position, Exponent, MinorCache, MinorIndex, MultiPoly};
use crate::tableaux::{Guard, Membership, Straightener};

/// Sorts `v`, returning the sign of the sorting permutation, or `None` when
/// an index repeats (the wedge is zero).
fn sort_with_sign(mut v: Vec<usize>) -> Option<(Vec<usize>, i64)> {
    let mut sign = 1;
    // insertion sort; the inputs are short
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn position_sign(a: usize, b: usize) -> i64 {
    if (a + b).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A homogeneous exterior form with polynomial coefficients. Keys are sorted
/// lists of variable slots (row-major order of `(i, j)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorForm {
    m: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, MultiPoly>,
}

impl ExteriorForm {
    pub fn zero(m: usize, degree: usize) -> Self {
        ExteriorForm { m, degree, terms: BTreeMap::new() }
    }

    /// `dx_{v_1} ∧ … ∧ dx_{v_n}` for slots in the given order.
    pub fn basis(m: usize, slots: &[usize]) -> Result<Self> {
        if let Some(&bad) = slots.iter().find(|&&s| s >= m * m) {
            reject!("variable slot {bad} outside a {m}x{m} matrix");
        }
        let mut f = Self::zero(m, slots.len());
        if let Some((sorted, sign)) = sort_with_sign(slots.to_vec()) {
            f.add_term(sorted, MultiPoly::constant(m, integer(sign)));
        }
        Ok(f)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<usize>, MultiPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the sorted slot list `key`.
    pub fn coefficient(&self, key: &[usize]) -> MultiPoly {
        self.terms.get(key).cloned().unwrap_or_else(|| MultiPoly::zero(self.m))
    }

    fn add_term(&mut self, key: Vec<usize>, coef: MultiPoly) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(|| MultiPoly::zero(self.m));
        *slot = &*slot + &coef;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &ExteriorForm) -> Result<ExteriorForm> {
        if self.m != other.m || self.degree != other.degree {
            reject!("cannot add forms of degree {} and {}", self.degree, other.degree);
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, p: &MultiPoly) -> ExteriorForm {
        let mut out = Self::zero(self.m, self.degree);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * p);
        }
        out
    }

    pub fn wedge(&self, other: &ExteriorForm) -> Result<ExteriorForm> {
        if self.m != other.m {
            reject!("cannot wedge forms over different matrix sizes");
        }
        let mut out = Self::zero(self.m, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let joined: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((key, sign)) = sort_with_sign(joined) {
                    out.add_term(key, (ca * cb).scale_int(sign));
                }
            }
        }
        Ok(out)
    }
}

trait ScaleInt {
    fn scale_int(&self, s: i64) -> Self;
}

impl ScaleInt for MultiPoly {
    fn scale_int(&self, s: i64) -> Self {
        if s == 1 {
            self.clone()
        } else {
            self.scalar_mul(&integer(s))
        }
    }
}

/// Gradient coefficients of a minor: `((i, j), (-1)^{r+c} Δ_{A∖i, B∖j})` for
/// `i = A[r]`, `j = B[c]`.
fn minor_gradient(idx: &MinorIndex, minors: &mut MinorCache) -> Vec<((usize, usize), MultiPoly)> {
    let m = minors.m();
    let mut out = Vec::with_capacity(idx.size() * idx.size());
    for (r, &i) in idx.rows().iter().enumerate() {
        for (c, &j) in idx.cols().iter().enumerate() {
            let rows: Vec<usize> = idx.rows().iter().copied().filter(|&x| x != i).collect();
            let cols: Vec<usize> = idx.cols().iter().copied().filter(|&x| x != j).collect();
            let sub = minors.get(&MinorIndex::new(rows, cols, m).expect("subset of a valid minor"));
            out.push(((i, j), sub.scale_int(position_sign(r, c))));
        }
    }
    out
}

/// `d Δ_{A,B} = Σ (-1)^{r+c} Δ_{A∖a_r, B∖b_c} dx_{a_r b_c}`.
pub fn d_minor(idx: &MinorIndex, m: usize) -> Result<ExteriorForm> {
    if idx.size() == 0 {
        reject!("the empty minor has no differential");
    }
    if idx.rows().iter().chain(idx.cols()).any(|&x| x > m) {
        reject!("minor does not fit in a {m}x{m} matrix");
    }
    let mut minors = MinorCache::new(m);
    let mut f = ExteriorForm::zero(m, 1);
    for ((i, j), c) in minor_gradient(idx, &mut minors) {
        f.add_term(vec![var_index(m, i, j)], c);
    }
    Ok(f)
}

/// Chart data for `w` on the locus where `Δ_{IJ}` is invertible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartForm {
    pub chart: MinorIndex,
    /// Slots of `S_IJ`, sorted.
    pub numerator_indices: Vec<usize>,
    pub exponent: usize,
    pub sign: i64,
}

impl ChartForm {
    pub fn rows(&self) -> &[usize] {
        self.chart.rows()
    }

    pub fn cols(&self) -> &[usize] {
        self.chart.cols()
    }
}

fn chart_set(m: usize, rows: &[usize], cols: &[usize]) -> Vec<usize> {
    let mut s: Vec<usize> = (1..=m)
        .flat_map(|i| (1..=m).map(move |j| (i, j)))
        .filter(|(i, j)| rows.contains(i) || cols.contains(j))
        .map(|(i, j)| var_index(m, i, j))
        .collect();
    s.sort_unstable();
    s
}

/// Which index moves between two charts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Swap {
    Identity,
    Row { from: usize, to: usize },
    Col { from: usize, to: usize },
}

fn classify(i: &[usize], j: &[usize], i2: &[usize], j2: &[usize]) -> Result<Swap> {
    let diff = |a: &[usize], b: &[usize]| -> Vec<usize> { a.iter().copied().filter(|x| !b.contains(x)).collect() };
    let (ri, ro) = (diff(i, i2), diff(i2, i));
    let (ci, co) = (diff(j, j2), diff(j2, j));
    match (ri.len(), ci.len()) {
        (0, 0) => Ok(Swap::Identity),
        (1, 0) => Ok(Swap::Row { from: ri[0], to: ro[0] }),
        (0, 1) => Ok(Swap::Col { from: ci[0], to: co[0] }),
        _ => reject!("charts {i:?}x{j:?} and {i2:?}x{j2:?} differ by more than one row or column"),
    }
}

/// Sign `ε` with `Δ_{IJ}^{-(m-k)} ∧S_IJ = ε Δ_{I'J'}^{-(m-k)} ∧S_{I'J'}` for a
/// single swap. Each transported `dx_{iq}` becomes
/// `-s_1 s_2 (Δ_{IJ} / Δ_{I'J'}) dx_{i'q}`, where `s_1`, `s_2` are the cofactor
/// signs of the new and old entry in the relating minor; `π` is the sign of
/// re-sorting `S_IJ` after the in-place substitution.
fn transition_sign(m: usize, rows: &[usize], cols: &[usize], swap: Swap) -> i64 {
    let s = chart_set(m, rows, cols);
    let (moving, fixed, old, new, transpose) = match swap {
        Swap::Identity => return 1,
        Swap::Row { from, to } => (rows, cols, from, to, false),
        Swap::Col { from, to } => (cols, rows, from, to, true),
    };
    let slot = |a: usize, b: usize| if transpose { var_index(m, b, a) } else { var_index(m, a, b) };
    // relating minor: moving side gains `new`, the other side gains q
    let mut grown: Vec<usize> = moving.iter().copied().chain([new]).collect();
    grown.sort_unstable();
    let pos = |x: usize| grown.iter().position(|&y| y == x).expect("present");
    let s1s2 = position_sign(pos(new), pos(old));
    let transported: Vec<usize> = (1..=m).filter(|q| !fixed.contains(q)).collect();
    let mut replaced = s.clone();
    for &q in &transported {
        let at = replaced.iter().position(|&v| v == slot(old, q)).expect("old entry lies in S_IJ");
        replaced[at] = slot(new, q);
    }
    let (_, pi) = sort_with_sign(replaced).expect("new entries lie outside S_IJ");
    let per_column = -s1s2;
    let factor = if transported.len().is_multiple_of(2) { 1 } else { per_column };
    pi * factor
}

/// Chart data with the sign fixed to `+1` on `I = J = {1..k}` and carried to
/// `(I, J)` one row swap, then one column swap, at a time.
pub fn chart_form(rows: &[usize], cols: &[usize], m: usize, k: usize) -> Result<ChartForm> {
    if k < 1 || k > m {
        reject!("rank bound k = {k} outside 1..={m}");
    }
    if rows.len() != k || cols.len() != k {
        reject!("chart needs {k} rows and {k} columns, got {} and {}", rows.len(), cols.len());
    }
    let chart = MinorIndex::new(rows.to_vec(), cols.to_vec(), m)?;
    let target_rows = chart.rows().to_vec();
    let target_cols = chart.cols().to_vec();
    let mut cur_rows: Vec<usize> = (1..=k).collect();
    let mut cur_cols: Vec<usize> = (1..=k).collect();
    let mut sign = 1;
    let leaving: Vec<usize> = cur_rows.iter().copied().filter(|r| !target_rows.contains(r)).collect();
    let entering: Vec<usize> = target_rows.iter().copied().filter(|r| !cur_rows.contains(r)).collect();
    for (&from, &to) in leaving.iter().zip(&entering) {
        sign *= transition_sign(m, &cur_rows, &cur_cols, Swap::Row { from, to });
        cur_rows.retain(|&r| r != from);
        cur_rows.push(to);
        cur_rows.sort_unstable();
    }
    let leaving: Vec<usize> = cur_cols.iter().copied().filter(|c| !target_cols.contains(c)).collect();
    let entering: Vec<usize> = target_cols.iter().copied().filter(|c| !cur_cols.contains(c)).collect();
    for (&from, &to) in leaving.iter().zip(&entering) {
        sign *= transition_sign(m, &cur_rows, &cur_cols, Swap::Col { from, to });
        cur_cols.retain(|&c| c != from);
        cur_cols.push(to);
        cur_cols.sort_unstable();
    }
    Ok(ChartForm { numerator_indices: chart_set(m, chart.rows(), chart.cols()), chart, exponent: m - k, sign })
}

/// Order in which bad entries are eliminated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EliminationOrder {
    Lex,
    ReverseLex,
    Custom(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    /// `∂ = F · w`, as the standard representative modulo `I_{k+1}`.
    #[serde(rename = "F")]
    pub f: MultiPoly,
    pub eliminations: usize,
    pub certificate: Membership,
}

fn validate_indices(indices: &[usize], m: usize, k: usize) -> Result<Vec<usize>> {
    let d = k * (2 * m - k);
    if indices.len() != d {
        reject!("a top form on D^{k} in {m}x{m} matrices has {d} differentials, got {}", indices.len());
    }
    if let Some(&bad) = indices.iter().find(|&&s| s >= m * m) {
        reject!("variable slot {bad} outside a {m}x{m} matrix");
    }
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        reject!("repeated differential in the top form");
    }
    Ok(sorted)
}

/// Reduces `∧_{v ∈ indices} dx_v` on the chart, using the given straightener
/// for arithmetic modulo `I_{k+1}`.
pub fn reduce_top_form_with(
    st: &mut Straightener,
    indices: &[usize],
    chart: &ChartForm,
    k: usize,
    order: &EliminationOrder,
) -> Result<ReductionResult> {
    let m = st.m();
    let sorted = validate_indices(indices, m, k)?;
    if chart.chart.size() != k {
        reject!("chart is {}x{} but k = {k}", chart.chart.size(), chart.chart.size());
    }
    let (rows, cols) = (chart.rows(), chart.cols());
    let is_bad = |v: &usize| {
        let (i, j) = var_position(m, *v);
        !rows.contains(&i) && !cols.contains(&j)
    };
    let mut bad: Vec<usize> = sorted.iter().copied().filter(is_bad).collect();
    match order {
        EliminationOrder::Lex => {}
        EliminationOrder::ReverseLex => bad.reverse(),
        EliminationOrder::Custom(seq) => {
            let mut s = seq.clone();
            s.sort_unstable();
            if s != bad {
                reject!("custom elimination order {seq:?} is not a permutation of the bad entries {bad:?}");
            }
            bad = seq.clone();
        }
    }

    let mut minors = MinorCache::new(m);
    let delta = minors.get(&chart.chart);
    let mut form = ExteriorForm::basis(m, &sorted)?;
    for &v in &bad {
        let (i, j) = var_position(m, v);
        let grown = MinorIndex::new(
            rows.iter().copied().chain([i]).collect(),
            cols.iter().copied().chain([j]).collect(),
            m,
        )?;
        let gradient = minor_gradient(&grown, &mut minors);
        let s = position_sign(
            grown.rows().iter().position(|&x| x == i).expect("row added"),
            grown.cols().iter().position(|&x| x == j).expect("col added"),
        );
        // Δ dx_ij = -s Σ_{(p,q) ≠ (i,j)} c_pq dx_pq
        let mut next = ExteriorForm::zero(m, form.degree);
        for (key, coef) in &form.terms {
            match key.iter().position(|&x| x == v) {
                None => next.add_term(key.clone(), coef * &delta),
                Some(at) => {
                    for ((p, q), c) in &gradient {
                        let u = var_index(m, *p, *q);
                        if u == v || key.contains(&u) {
                            continue;
                        }
                        let mut replaced = key.clone();
                        replaced[at] = u;
                        let (new_key, sigma) = sort_with_sign(replaced).expect("no repeats");
                        next.add_term(new_key, (coef * c).scale_int(-s * sigma));
                    }
                }
            }
        }
        form = next;
    }
    let b = bad.len();
    let g = form.coefficient(&chart.numerator_indices);
    if form.terms.keys().any(|key| *key != chart.numerator_indices) {
        return Err(Error::Inconsistent("reduction left a differential outside S_IJ".into()));
    }
    let exp = chart.exponent;
    let local = if b <= exp {
        st.normal_form(&(&g * &delta.pow((exp - b) as u32)), k)?
    } else {
        let divisor = delta.pow((b - exp) as u32);
        let q = st.divide_in_quotient(&g, &divisor, k)?.ok_or_else(|| {
            Error::Inconsistent(format!("Δ^{} does not divide the reduced coefficient in R_{k}", b - exp))
        })?;
        st.normal_form(&q, k)?
    };
    let f = local.scale_int(chart.sign);
    let certificate = st.subalgebra_membership(&f, k)?;
    Ok(ReductionResult { f, eliminations: b, certificate })
}

/// One-shot reduction with lexicographic elimination.
pub fn reduce_top_form(indices: &[usize], chart: &ChartForm, m: usize, k: usize) -> Result<ReductionResult> {
    reduce_top_form_with(&mut Straightener::new(m, Guard::default()), indices, chart, k, &EliminationOrder::Lex)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnCheck {
    /// The row (or column) index along which `dx` moves.
    pub transported: usize,
    /// `Λ ∧ dΔ⁺` has exactly the two expected terms with coefficients
    /// `±Δ_{IJ}` and `±Δ_{I'J'}`.
    pub two_term_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionReport {
    pub from: MinorIndex,
    pub to: MinorIndex,
    pub swap: Swap,
    pub epsilon: i64,
    pub columns: Vec<ColumnCheck>,
    /// Chart signs satisfy `sign(I'J') = ε · sign(IJ)`.
    pub sign_consistent: bool,
    /// Reducing `∧S_{I'J'}` on chart `IJ` yields `sign(I'J') Δ_{I'J'}^{m-k}`.
    pub reduction_consistent: bool,
    pub holds: bool,
}

pub fn verify_chart_transition_with(
    st: &mut Straightener,
    from: (&[usize], &[usize]),
    to: (&[usize], &[usize]),
    k: usize,
) -> Result<TransitionReport> {
    let m = st.m();
    let a = chart_form(from.0, from.1, m, k)?;
    let b = chart_form(to.0, to.1, m, k)?;
    let swap = classify(a.rows(), a.cols(), b.rows(), b.cols())?;
    let epsilon = transition_sign(m, a.rows(), a.cols(), swap);
    let mut minors = MinorCache::new(m);
    let delta_a = minors.get(&a.chart);
    let delta_b = minors.get(&b.chart);

    let mut columns = Vec::new();
    if let Swap::Row { from: old, to: new } | Swap::Col { from: old, to: new } = swap {
        let transpose = matches!(swap, Swap::Col { .. });
        let slot = |x: usize, q: usize| if transpose { var_index(m, q, x) } else { var_index(m, x, q) };
        let fixed = if transpose { a.rows() } else { a.cols() };
        let moving = if transpose { a.cols() } else { a.rows() };
        let common: Vec<usize> = a.numerator_indices.iter().copied().filter(|v| b.numerator_indices.contains(v)).collect();
        let lambda = ExteriorForm::basis(m, &common)?;
        for q in (1..=m).filter(|q| !fixed.contains(q)) {
            let mut grown_moving: Vec<usize> = moving.iter().copied().chain([new]).collect();
            grown_moving.sort_unstable();
            let mut grown_fixed: Vec<usize> = fixed.iter().copied().chain([q]).collect();
            grown_fixed.sort_unstable();
            let relating = if transpose {
                MinorIndex::new(grown_fixed, grown_moving, m)?
            } else {
                MinorIndex::new(grown_moving, grown_fixed, m)?
            };
            let wedge = lambda.wedge(&d_minor(&relating, m)?)?;
            let key_old = sort_with_sign(common.iter().copied().chain([slot(old, q)]).collect()).map(|(k, _)| k);
            let key_new = sort_with_sign(common.iter().copied().chain([slot(new, q)]).collect()).map(|(k, _)| k);
            let matches_up_to_sign = |coef: &MultiPoly, target: &MultiPoly| *coef == *target || *coef == -target;
            let ok = wedge.terms.len() == 2
                && key_old.as_ref().is_some_and(|k| matches_up_to_sign(&wedge.coefficient(k), &delta_b))
                && key_new.as_ref().is_some_and(|k| matches_up_to_sign(&wedge.coefficient(k), &delta_a));
            columns.push(ColumnCheck { transported: q, two_term_identity: ok });
        }
    }

    let sign_consistent = b.sign == a.sign * epsilon;
    let reduced = reduce_top_form_with(st, &b.numerator_indices, &a, k, &EliminationOrder::Lex)?;
    let expected = st.normal_form(&delta_b.pow(b.exponent as u32), k)?.scale_int(b.sign);
    let reduction_consistent = reduced.f == expected;
    let holds = sign_consistent && reduction_consistent && columns.iter().all(|c| c.two_term_identity);
    Ok(TransitionReport { from: a.chart, to: b.chart, swap, epsilon, columns, sign_consistent, reduction_consistent, holds })
}

/// Checks the transition between two charts that differ in at most one row
/// or one column.
pub fn verify_chart_transition(
    from: (&[usize], &[usize]),
    to: (&[usize], &[usize]),
    m: usize,
    k: usize,
) -> Result<TransitionReport> {
    verify_chart_transition_with(&mut Straightener::new(m, Guard::default()), from, to, k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopFormReport {
    /// 1-based `(i, j)` of each differential.
    pub indices: Vec<(usize, usize)>,
    #[serde(rename = "F")]
    pub f: MultiPoly,
    #[serde(rename = "F_text")]
    pub f_text: String,
    pub member: bool,
    /// `F` has degree `k(m-k)` (or vanishes).
    pub degree_ok: bool,
    pub order_independent: bool,
    pub chart_consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealizedPower {
    pub chart: MinorIndex,
    pub sign: i64,
    pub realized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NashReport {
    pub m: usize,
    pub k: usize,
    pub top_forms: Vec<TopFormReport>,
    pub realized_powers: Vec<RealizedPower>,
    pub transitions: Vec<TransitionReport>,
    /// Dimension of the span of all `F`.
    pub f_span_dimension: usize,
    pub all_members: bool,
    pub all_order_independent: bool,
    pub all_chart_consistent: bool,
    pub all_powers_realized: bool,
    pub all_transitions_hold: bool,
    pub passed: bool,
}

fn charts(m: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let subsets: Vec<Vec<usize>> = (1..=m).combinations(k).collect();
    subsets.iter().cartesian_product(&subsets).map(|(r, c)| (r.clone(), c.clone())).collect()
}

/// Reduces every top form on `D^k` (for `m ≤ 3`) and checks membership,
/// independence of the elimination order and of the chart, that each
/// `Δ_{IJ}^{m-k}` arises from its own chart, and every chart transition.
pub fn verify_nash(m: usize, k: usize) -> Result<NashReport> {
    if k < 1 || k > m {
        reject!("rank bound k = {k} outside 1..={m}");
    }
    if m > 3 {
        return Err(Error::Guard(format!("exhaustive Nash verification is limited to m ≤ 3, got m = {m}")));
    }
    let guard = Guard::default();
    let reference = chart_form(&(1..=k).collect::<Vec<_>>(), &(1..=k).collect::<Vec<_>>(), m, k)?;
    let all_charts: Vec<ChartForm> = charts(m, k).iter().map(|(r, c)| chart_form(r, c, m, k)).collect::<Result<_>>()?;
    let dim = k * (2 * m - k);
    let subsets: Vec<Vec<usize>> = (0..m * m).combinations(dim).collect();

    let top_forms: Vec<TopFormReport> = subsets
        .par_iter()
        .map_init(
            || Straightener::new(m, guard),
            |st, subset| -> Result<TopFormReport> {
                let lex = reduce_top_form_with(st, subset, &reference, k, &EliminationOrder::Lex)?;
                let rev = reduce_top_form_with(st, subset, &reference, k, &EliminationOrder::ReverseLex)?;
                let mut chart_consistent = true;
                for chart in &all_charts {
                    let other = reduce_top_form_with(st, subset, chart, k, &EliminationOrder::Lex)?;
                    chart_consistent &= other.f == lex.f;
                }
                let degree_ok = match lex.f.homogeneity() {
                    crate::poly::Homogeneity::Zero => true,
                    crate::poly::Homogeneity::Degree(d) => d as usize == k * (m - k),
                    crate::poly::Homogeneity::NotHomogeneous => false,
                };
                Ok(TopFormReport {
                    indices: subset.iter().map(|&v| var_position(m, v)).collect(),
                    f_text: lex.f.to_string(),
                    member: lex.certificate.is_member(),
                    degree_ok,
                    order_independent: lex.f == rev.f,
                    chart_consistent,
                    f: lex.f,
                })
            },
        )
        .collect::<Result<_>>()?;

    let mut st = Straightener::new(m, guard);
    let mut minors = MinorCache::new(m);
    let mut realized_powers = Vec::new();
    for chart in &all_charts {
        let pos = subsets.iter().position(|s| *s == chart.numerator_indices).expect("S_IJ is a subset of the right size");
        let expected = st.normal_form(&minors.get(&chart.chart).pow(chart.exponent as u32), k)?.scale_int(chart.sign);
        realized_powers.push(RealizedPower { chart: chart.chart.clone(), sign: chart.sign, realized: top_forms[pos].f == expected });
    }

    let mut transitions = Vec::new();
    for a in &all_charts {
        for b in &all_charts {
            if classify(a.rows(), a.cols(), b.rows(), b.cols()).is_ok() {
                transitions.push(verify_chart_transition_with(&mut st, (a.rows(), a.cols()), (b.rows(), b.cols()), k)?);
            }
        }
    }

    let keys: Vec<Exponent> = top_forms.iter().flat_map(|t| t.f.terms().keys().cloned()).sorted().dedup().collect();
    let matrix: Vec<Vec<Rational>> = top_forms.iter().map(|t| keys.iter().map(|e| t.f.coefficient(e)).collect()).collect();
    let f_span_dimension = crate::linalg::rank(&matrix);

    let all_members = top_forms.iter().all(|t| t.member && t.degree_ok);
    let all_order_independent = top_forms.iter().all(|t| t.order_independent);
    let all_chart_consistent = top_forms.iter().all(|t| t.chart_consistent);
    let all_powers_realized = realized_powers.iter().all(|r| r.realized);
    let all_transitions_hold = transitions.iter().all(|t| t.holds);
    let passed = all_members && all_order_independent && all_chart_consistent && all_powers_realized && all_transitions_hold;
    Ok(NashReport {
        m,
        k,
        top_forms,
        realized_powers,
        transitions,
        f_span_dimension,
        all_members,
        all_order_independent,
        all_chart_consistent,
        all_powers_realized,
        all_transitions_hold,
        passed,
    })
}
