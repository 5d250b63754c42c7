//! Young tableaux, bideterminants and the straightening law.
//!
//! Rows of a tableau index minors: the row `[a_1, …, a_e]` of the left
//! tableau and the matching row of the right tableau pick out an `e × e`
//! minor. Rows are read as sets, so their order inside a row does not affect
//! the bideterminant. A tableau is standard when its rows strictly increase
//! and its columns weakly increase.
//!
//! Straightening is linear algebra: the standard bideterminants of a fixed
//! bicontent are a basis of the polynomials of that bicontent, so any
//! polynomial is expanded by an exact solve. Working modulo `I_{k+1}` drops
//! the standard terms with a row longer than `k`, since those span the ideal.

use std::collections::{BTreeMap, HashMap};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{reject, Error, Result};
use crate::linalg::{SparseEchelon, SparseVec};
use crate::pairs::{serde_rational, Rational};
use crate::poly::{Bicontent, Exponent, Homogeneity, MinorCache, MinorIndex, MultiPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.contains(&0) {
            reject!("Young diagram rows must be positive: {rows:?}");
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            reject!("Young diagram rows must be nonincreasing: {rows:?}");
        }
        Ok(YoungDiagram { rows })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn first_row(&self) -> usize {
        self.rows.first().copied().unwrap_or(0)
    }

    /// `(k, k, …, k)`, possibly empty.
    pub fn is_rectangular(&self, k: usize) -> bool {
        self.rows.iter().all(|&r| r == k)
    }
}

impl TryFrom<Vec<usize>> for YoungDiagram {
    type Error = Error;
    fn try_from(rows: Vec<usize>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<YoungDiagram> for Vec<usize> {
    fn from(d: YoungDiagram) -> Self {
        d.rows
    }
}

/// Every prefix sum of `sigma` is at most that of `tau`.
pub fn dominance_leq(sigma: &YoungDiagram, tau: &YoungDiagram) -> bool {
    let len = sigma.rows.len().max(tau.rows.len());
    let (mut a, mut b) = (0, 0);
    for i in 0..len {
        a += sigma.rows.get(i).copied().unwrap_or(0);
        b += tau.rows.get(i).copied().unwrap_or(0);
        if a > b {
            return false;
        }
    }
    true
}

/// All partitions of `n` with parts at most `max_part`, in decreasing
/// lexicographic order.
pub fn partitions(n: usize, max_part: usize) -> Vec<YoungDiagram> {
    fn rec(n: usize, cap: usize, buf: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
        if n == 0 {
            out.push(YoungDiagram { rows: buf.clone() });
            return;
        }
        for part in (1..=cap.min(n)).rev() {
            buf.push(part);
            rec(n - part, part, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_part, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    rows: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TableauJson {
    shape: Vec<usize>,
    rows: Vec<Vec<usize>>,
}

impl Serialize for Tableau {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableauJson { shape: self.rows.iter().map(Vec::len).collect(), rows: self.rows.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Tableau {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TableauJson::deserialize(d)?;
        let lens: Vec<usize> = raw.rows.iter().map(Vec::len).collect();
        if lens != raw.shape {
            return Err(serde::de::Error::custom(format!(
                "tableau rows have lengths {lens:?} but the shape is {:?}",
                raw.shape
            )));
        }
        Tableau::new(raw.rows).map_err(serde::de::Error::custom)
    }
}

impl Tableau {
    /// Row lengths must form a Young diagram and entries must be positive.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        YoungDiagram::new(rows.iter().map(Vec::len).collect())?;
        if rows.iter().flatten().any(|&e| e == 0) {
            reject!("tableau entries are 1-based: {rows:?}");
        }
        Ok(Tableau { rows })
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn shape(&self) -> YoungDiagram {
        YoungDiagram { rows: self.rows.iter().map(Vec::len).collect() }
    }

    pub fn max_entry(&self) -> usize {
        self.rows.iter().flatten().copied().max().unwrap_or(0)
    }

    /// How often each of `1..=m` occurs.
    pub fn content(&self, m: usize) -> Vec<u32> {
        let mut counts = vec![0; m];
        for &e in self.rows.iter().flatten() {
            counts[e - 1] += 1;
        }
        counts
    }

    /// Rows strictly increase and columns weakly increase.
    pub fn is_standard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let cols_ok = self.rows.windows(2).all(|pair| pair[1].iter().zip(&pair[0]).all(|(below, above)| above <= below));
        rows_ok && cols_ok
    }

    /// Number of entries `≤ q` in the first `p` rows.
    fn count(&self, p: usize, q: usize) -> usize {
        self.rows.iter().take(p).flatten().filter(|&&e| e <= q).count()
    }
}

/// For every `p` and `q`, the first `p` rows of `t` contain at most as many
/// entries `≤ q` as the first `p` rows of `u`.
pub fn tableau_leq(t: &Tableau, u: &Tableau) -> bool {
    let p_max = t.rows.len().max(u.rows.len());
    let q_max = t.max_entry().max(u.max_entry());
    (1..=p_max).all(|p| (1..=q_max).all(|q| t.count(p, q) <= u.count(p, q)))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "DoubleTableauJson")]
pub struct DoubleTableau {
    left: Tableau,
    right: Tableau,
}

#[derive(Deserialize)]
struct DoubleTableauJson {
    left: Tableau,
    right: Tableau,
}

impl TryFrom<DoubleTableauJson> for DoubleTableau {
    type Error = Error;
    fn try_from(raw: DoubleTableauJson) -> Result<Self> {
        DoubleTableau::new(raw.left, raw.right)
    }
}

impl DoubleTableau {
    pub fn new(left: Tableau, right: Tableau) -> Result<Self> {
        if left.shape() != right.shape() {
            reject!("double tableau sides have shapes {:?} and {:?}", left.shape().rows, right.shape().rows);
        }
        Ok(DoubleTableau { left, right })
    }

    /// Convenience constructor from raw rows.
    pub fn from_rows(left: Vec<Vec<usize>>, right: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(Tableau::new(left)?, Tableau::new(right)?)
    }

    pub fn left(&self) -> &Tableau {
        &self.left
    }

    pub fn right(&self) -> &Tableau {
        &self.right
    }

    pub fn shape(&self) -> YoungDiagram {
        self.left.shape()
    }

    pub fn is_standard(&self) -> bool {
        self.left.is_standard() && self.right.is_standard()
    }

    pub fn bicontent(&self, m: usize) -> Bicontent {
        (self.left.content(m), self.right.content(m))
    }

    fn check(&self, m: usize) -> Result<()> {
        for side in [&self.left, &self.right] {
            if side.max_entry() > m {
                reject!("tableau entry {} exceeds m = {m}", side.max_entry());
            }
            for row in &side.rows {
                let mut sorted = row.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    reject!("row {row:?} repeats an entry, so it names no minor");
                }
            }
        }
        Ok(())
    }
}

/// Componentwise order on double tableaux: `(S|T) ≤ (S'|T')` when `S ≤ S'`
/// and `T ≤ T'`.
pub fn double_tableau_leq(a: &DoubleTableau, b: &DoubleTableau) -> bool {
    tableau_leq(&a.left, &b.left) && tableau_leq(&a.right, &b.right)
}

fn bideterminant_with(dt: &DoubleTableau, m: usize, minors: &mut MinorCache) -> Result<MultiPoly> {
    dt.check(m)?;
    let mut product = MultiPoly::one(m);
    for (r, c) in dt.left.rows.iter().zip(&dt.right.rows) {
        let idx = MinorIndex::new(r.clone(), c.clone(), m)?;
        product = &product * &minors.get(&idx);
    }
    Ok(product)
}

/// Product over rows of the minor with those row and column sets.
pub fn bideterminant(dt: &DoubleTableau, m: usize) -> Result<MultiPoly> {
    bideterminant_with(dt, m, &mut MinorCache::new(m))
}

/// Limits on basis enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Guard {
    pub max_degree: usize,
    pub max_basis: usize,
}

impl Default for Guard {
    fn default() -> Self {
        Guard { max_degree: 6, max_basis: 50_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisSpec {
    /// Exactly this bicontent (row counts, column counts).
    Content(Bicontent),
    /// Every bicontent of this total degree.
    Degree(usize),
}

/// Standard tableaux of `shape` with entries in `1..=m`, constrained to the
/// content `counts` when given.
fn standard_fillings(shape: &YoungDiagram, m: usize, counts: Option<&[u32]>) -> Vec<Tableau> {
    struct Ctx<'a> {
        shape: &'a [usize],
        m: usize,
        remaining: Option<Vec<u32>>,
        rows: Vec<Vec<usize>>,
        out: Vec<Tableau>,
    }
    fn rec(ctx: &mut Ctx, r: usize, c: usize) {
        if c == ctx.shape[r] {
            if r + 1 == ctx.shape.len() {
                ctx.out.push(Tableau { rows: ctx.rows.clone() });
                return;
            }
            ctx.rows.push(Vec::new());
            rec(ctx, r + 1, 0);
            ctx.rows.pop();
            return;
        }
        let left = if c > 0 { ctx.rows[r][c - 1] + 1 } else { 1 };
        let above = if r > 0 { ctx.rows[r - 1][c] } else { 1 };
        // the rest of the row must still fit below m
        let hi = ctx.m + 1 - (ctx.shape[r] - c);
        for v in left.max(above)..=hi {
            if let Some(rem) = &mut ctx.remaining {
                if rem[v - 1] == 0 {
                    continue;
                }
                rem[v - 1] -= 1;
            }
            ctx.rows[r].push(v);
            rec(ctx, r, c + 1);
            ctx.rows[r].pop();
            if let Some(rem) = &mut ctx.remaining {
                rem[v - 1] += 1;
            }
        }
    }
    if shape.first_row() > m {
        return Vec::new();
    }
    let mut ctx = Ctx { shape: shape.rows(), m, remaining: counts.map(<[u32]>::to_vec), rows: vec![Vec::new()], out: Vec::new() };
    if shape.rows().is_empty() {
        return vec![Tableau { rows: Vec::new() }];
    }
    rec(&mut ctx, 0, 0);
    ctx.out
}

/// Standard double tableaux of the given content or degree, with every row
/// of length at most `k_bound` when set. Sorted lexicographically.
pub fn enumerate_standard_basis(m: usize, k_bound: Option<usize>, spec: &BasisSpec, guard: Guard) -> Result<Vec<DoubleTableau>> {
    let (degree, contents) = match spec {
        BasisSpec::Content((rows, cols)) => {
            if rows.len() != m || cols.len() != m {
                reject!("content vectors must have length m = {m}");
            }
            let (dr, dc) = (rows.iter().sum::<u32>(), cols.iter().sum::<u32>());
            if dr != dc {
                return Ok(Vec::new());
            }
            (dr as usize, Some((rows.as_slice(), cols.as_slice())))
        }
        BasisSpec::Degree(d) => (*d, None),
    };
    if degree > guard.max_degree {
        return Err(Error::Guard(format!("degree {degree} exceeds the enumeration limit {}", guard.max_degree)));
    }
    let width = k_bound.unwrap_or(m).min(m);
    let mut out = Vec::new();
    for shape in partitions(degree, width) {
        let lefts = standard_fillings(&shape, m, contents.map(|c| c.0));
        let rights = standard_fillings(&shape, m, contents.map(|c| c.1));
        if out.len() + lefts.len() * rights.len() > guard.max_basis {
            return Err(Error::Guard(format!("standard basis exceeds {} elements", guard.max_basis)));
        }
        for l in &lefts {
            for r in &rights {
                out.push(DoubleTableau { left: l.clone(), right: r.clone() });
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpansionTerm {
    #[serde(with = "serde_rational")]
    pub coef: Rational,
    pub tableau: DoubleTableau,
}

/// A linear combination of standard double tableaux, sorted by tableau.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct StandardExpansion {
    pub terms: Vec<ExpansionTerm>,
}

impl StandardExpansion {
    fn from_map(map: BTreeMap<DoubleTableau, Rational>) -> Self {
        StandardExpansion {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(tableau, coef)| ExpansionTerm { coef, tableau }).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops every term with a row longer than `k`.
    pub fn project(&self, k: usize) -> StandardExpansion {
        StandardExpansion { terms: self.terms.iter().filter(|t| t.tableau.shape().first_row() <= k).cloned().collect() }
    }

    pub fn reexpand(&self, m: usize) -> Result<MultiPoly> {
        let mut minors = MinorCache::new(m);
        let mut total = MultiPoly::zero(m);
        for t in &self.terms {
            total = &total + &bideterminant_with(&t.tableau, m, &mut minors)?.scalar_mul(&t.coef);
        }
        Ok(total)
    }
}

struct Component {
    basis: Vec<DoubleTableau>,
    echelon: SparseEchelon<Exponent>,
}

/// Expands polynomials in the standard basis, caching one solved system per
/// bicontent.
pub struct Straightener {
    m: usize,
    guard: Guard,
    minors: MinorCache,
    components: HashMap<Bicontent, Component>,
}

impl Straightener {
    pub fn new(m: usize, guard: Guard) -> Self {
        Straightener { m, guard, minors: MinorCache::new(m), components: HashMap::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bideterminant(&mut self, dt: &DoubleTableau) -> Result<MultiPoly> {
        bideterminant_with(dt, self.m, &mut self.minors)
    }

    fn component(&mut self, content: &Bicontent) -> Result<&Component> {
        if !self.components.contains_key(content) {
            let basis = enumerate_standard_basis(self.m, None, &BasisSpec::Content(content.clone()), self.guard)?;
            let mut echelon = SparseEchelon::new();
            for dt in &basis {
                let poly = bideterminant_with(dt, self.m, &mut self.minors)?;
                if !echelon.insert(poly.into_terms()) {
                    return Err(Error::Inconsistent(format!(
                        "standard bideterminants of bicontent {content:?} are linearly dependent"
                    )));
                }
            }
            self.components.insert(content.clone(), Component { basis, echelon });
        }
        Ok(&self.components[content])
    }

    /// The unique standard expansion of `p`.
    pub fn expand(&mut self, p: &MultiPoly) -> Result<StandardExpansion> {
        if p.m() != self.m {
            reject!("polynomial over {}x{} matrices given to a straightener for m = {}", p.m(), p.m(), self.m);
        }
        let mut map = BTreeMap::new();
        for (content, part) in p.split_by_bicontent() {
            let comp = self.component(&content)?;
            let coeffs = comp.echelon.express(part.terms()).ok_or_else(|| {
                Error::Inconsistent(format!("polynomial of bicontent {content:?} is outside the standard span"))
            })?;
            for (i, c) in coeffs {
                map.insert(comp.basis[i].clone(), c);
            }
        }
        Ok(StandardExpansion::from_map(map))
    }

    /// Expansion of the bideterminant of `dt`, projected to rows `≤ k` when
    /// `k_bound` is set.
    pub fn straighten(&mut self, dt: &DoubleTableau, k_bound: Option<usize>) -> Result<StandardExpansion> {
        let p = self.bideterminant(dt)?;
        let full = self.expand(&p)?;
        Ok(match k_bound {
            Some(k) => full.project(k),
            None => full,
        })
    }

    /// Image of `p` in `R_k` as a standard expansion with rows `≤ k`.
    pub fn project(&mut self, p: &MultiPoly, k: usize) -> Result<StandardExpansion> {
        Ok(self.expand(p)?.project(k))
    }

    /// Canonical polynomial representative of `p` modulo `I_{k+1}`.
    pub fn normal_form(&mut self, p: &MultiPoly, k: usize) -> Result<MultiPoly> {
        let proj = self.project(p, k)?;
        let mut total = MultiPoly::zero(self.m);
        for t in &proj.terms {
            total = &total + &self.bideterminant(&t.tableau)?.scalar_mul(&t.coef);
        }
        Ok(total)
    }

    /// Membership of `f` in the subalgebra generated by the `k × k` minors,
    /// tested in `R_k`.
    pub fn subalgebra_membership(&mut self, f: &MultiPoly, k: usize) -> Result<Membership> {
        if k < 1 || k > self.m {
            reject!("minor size k = {k} outside 1..={}", self.m);
        }
        let degree = match f.homogeneity() {
            Homogeneity::Zero => return Ok(Membership::Member(StandardExpansion::default())),
            Homogeneity::NotHomogeneous => reject!("subalgebra membership needs a homogeneous polynomial"),
            Homogeneity::Degree(d) => d as usize,
        };
        if degree % k != 0 {
            reject!("degree {degree} is not a multiple of k = {k}");
        }
        let proj = self.project(f, k)?;
        match proj.terms.iter().find(|t| !t.tableau.shape().is_rectangular(k)) {
            None => Ok(Membership::Member(proj)),
            Some(bad) => Ok(Membership::NotMember { expansion: proj.clone(), witness: bad.tableau.shape() }),
        }
    }

    /// Solves `d · F ≡ g` modulo `I_{k+1}` for `F` in the span of standard
    /// bideterminants with rows `≤ k`. Returns `None` if no such `F` exists.
    /// `d` must have a single bicontent, as a power of a minor does.
    pub fn divide_in_quotient(&mut self, g: &MultiPoly, d: &MultiPoly, k: usize) -> Result<Option<MultiPoly>> {
        let d_parts = d.split_by_bicontent();
        if d_parts.len() != 1 {
            reject!("divisor must have a single bicontent");
        }
        let (d_content, _) = d_parts.into_iter().next().expect("one part");
        let mut quotient = MultiPoly::zero(self.m);
        let key = |e: &StandardExpansion| -> SparseVec<DoubleTableau> {
            e.terms.iter().map(|t| (t.tableau.clone(), t.coef.clone())).collect()
        };
        for (content, part) in g.split_by_bicontent() {
            let target = self.project(&part, k)?;
            if target.is_zero() {
                continue;
            }
            let sub = |a: &[u32], b: &[u32]| -> Option<Vec<u32>> { a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect() };
            let (Some(rows), Some(cols)) = (sub(&content.0, &d_content.0), sub(&content.1, &d_content.1)) else {
                return Ok(None);
            };
            let basis = enumerate_standard_basis(self.m, Some(k), &BasisSpec::Content((rows, cols)), self.guard)?;
            let mut echelon = SparseEchelon::new();
            let mut polys = Vec::with_capacity(basis.len());
            for dt in &basis {
                let b = self.bideterminant(dt)?;
                let image = self.project(&(d * &b), k)?;
                if !echelon.insert(key(&image)) {
                    return Err(Error::Inconsistent("multiplication by a nonzero element of R_k is not injective".into()));
                }
                polys.push(b);
            }
            let Some(coeffs) = echelon.express(&key(&target)) else {
                return Ok(None);
            };
            for (i, c) in coeffs {
                quotient = &quotient + &polys[i].scalar_mul(&c);
            }
        }
        Ok(Some(quotient))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Membership {
    /// Every term has shape `(k, …, k)`.
    Member(StandardExpansion),
    NotMember { expansion: StandardExpansion, witness: YoungDiagram },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// One-shot [`Straightener::straighten`] with default guards.
pub fn straighten(dt: &DoubleTableau, m: usize, k_bound: Option<usize>) -> Result<StandardExpansion> {
    Straightener::new(m, Guard::default()).straighten(dt, k_bound)
}

/// One-shot [`Straightener::subalgebra_membership`] with default guards.
pub fn subalgebra_membership(f: &MultiPoly, m: usize, k: usize) -> Result<Membership> {
    if f.m() != m {
        reject!("polynomial is over {}x{} matrices, not {m}x{m}", f.m(), f.m());
    }
    Straightener::new(m, Guard::default()).subalgebra_membership(f, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::integer;
    use itertools::Itertools;

    fn yd(rows: &[usize]) -> YoungDiagram {
        YoungDiagram::new(rows.to_vec()).unwrap()
    }

    fn tab(rows: &[&[usize]]) -> Tableau {
        Tableau::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn dt(left: &[&[usize]], right: &[&[usize]]) -> DoubleTableau {
        DoubleTableau::new(tab(left), tab(right)).unwrap()
    }

    fn x(m: usize, i: usize, j: usize) -> MultiPoly {
        MultiPoly::var(m, i, j).unwrap()
    }

    fn minor(m: usize, rows: &[usize], cols: &[usize]) -> MultiPoly {
        crate::poly::minor_poly(&MinorIndex::new(rows.to_vec(), cols.to_vec(), m).unwrap(), m).unwrap()
    }

    #[test]
    fn dominance() {
        assert!(dominance_leq(&yd(&[1, 1]), &yd(&[2])));
        assert!(!dominance_leq(&yd(&[2, 2]), &yd(&[3])));
        assert!(dominance_leq(&yd(&[2, 1]), &yd(&[2, 1])));
        assert!(!dominance_leq(&yd(&[2]), &yd(&[1, 1])));
        assert!(YoungDiagram::new(vec![1, 2]).is_err());
    }

    #[test]
    fn tableau_order() {
        let t = tab(&[&[1, 2], &[3]]);
        assert!(tableau_leq(&t, &t));
        assert!(tableau_leq(&tab(&[&[1, 3]]), &tab(&[&[1, 2]])));
        assert!(!tableau_leq(&tab(&[&[1, 2]]), &tab(&[&[1, 3]])));
        // (p=1,q=2) favours the left, (p=2,q=1) favours the right
        let a = tab(&[&[1, 2], &[3]]);
        let b = tab(&[&[1, 3], &[1]]);
        assert!(!tableau_leq(&a, &b) && !tableau_leq(&b, &a));
    }

    #[test]
    fn standardness() {
        assert!(tab(&[&[1, 2], &[1, 3]]).is_standard());
        assert!(!tab(&[&[2, 1]]).is_standard());
        assert!(tab(&[&[1, 2], &[1]]).is_standard());
        assert!(!tab(&[&[2, 3], &[1]]).is_standard());
        assert!(!tab(&[&[1, 1]]).is_standard());
    }

    #[test]
    fn bideterminants() {
        assert_eq!(bideterminant(&dt(&[&[1, 2]], &[&[1, 2]]), 2).unwrap(), minor(2, &[1, 2], &[1, 2]));
        assert_eq!(bideterminant(&dt(&[&[1], &[2]], &[&[2], &[1]]), 2).unwrap(), &x(2, 1, 2) * &x(2, 2, 1));
        let example = dt(&[&[2, 1, 3], &[2, 3], &[1]], &[&[1, 2, 3], &[1, 2], &[2]]);
        let expected = &(&minor(3, &[1, 2, 3], &[1, 2, 3]) * &minor(3, &[2, 3], &[1, 2])) * &x(3, 1, 2);
        assert_eq!(bideterminant(&example, 3).unwrap(), expected);
        assert!(bideterminant(&dt(&[&[1, 1]], &[&[1, 2]]), 2).is_err());
        assert!(bideterminant(&dt(&[&[3]], &[&[1]]), 2).is_err());
    }

    #[test]
    fn tableau_json() {
        let t = tab(&[&[1, 2], &[1]]);
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"shape":[2,1],"rows":[[1,2],[1]]}"#);
        assert_eq!(serde_json::from_str::<Tableau>(&json).unwrap(), t);
        assert!(serde_json::from_str::<Tableau>(r#"{"shape":[1,1],"rows":[[1,2],[1]]}"#).is_err());
        let d: DoubleTableau =
            serde_json::from_str(r#"{"left":{"shape":[1],"rows":[[1]]},"right":{"shape":[1],"rows":[[2]]}}"#).unwrap();
        assert_eq!(d, dt(&[&[1]], &[&[2]]));
        assert!(serde_json::from_str::<DoubleTableau>(
            r#"{"left":{"shape":[1],"rows":[[1]]},"right":{"shape":[1,1],"rows":[[2],[1]]}}"#
        )
        .is_err());
    }

    #[test]
    fn basis_enumeration() {
        let g = Guard::default();
        assert_eq!(enumerate_standard_basis(2, None, &BasisSpec::Degree(1), g).unwrap().len(), 4);
        let content = (vec![1, 1], vec![1, 1]);
        let basis = enumerate_standard_basis(2, None, &BasisSpec::Content(content.clone()), g).unwrap();
        assert_eq!(basis, vec![dt(&[&[1], &[2]], &[&[1], &[2]]), dt(&[&[1, 2]], &[&[1, 2]])]);
        let bounded = enumerate_standard_basis(2, Some(1), &BasisSpec::Content(content), g).unwrap();
        assert_eq!(bounded, vec![dt(&[&[1], &[2]], &[&[1], &[2]])]);
        assert!(bounded.iter().all(|d| d.shape().first_row() <= 1));
        assert!(matches!(enumerate_standard_basis(3, None, &BasisSpec::Degree(7), g), Err(Error::Guard(_))));
        let tight = Guard { max_degree: 6, max_basis: 10 };
        assert!(matches!(enumerate_standard_basis(3, None, &BasisSpec::Degree(2), tight), Err(Error::Guard(_))));
    }

    /// Brute force: every filling of every shape, filtered by standardness.
    fn all_fillings(shape: &YoungDiagram, m: usize) -> Vec<Tableau> {
        let cells = shape.size();
        (0..cells)
            .map(|_| 1..=m)
            .multi_cartesian_product()
            .map(|flat| {
                let mut it = flat.into_iter();
                Tableau { rows: shape.rows().iter().map(|&len| it.by_ref().take(len).collect()).collect() }
            })
            .collect()
    }

    #[test]
    fn enumeration_matches_filtering() {
        for m in 1..=3 {
            for d in 1..=3 {
                for shape in partitions(d, m) {
                    let mut brute: Vec<Tableau> = all_fillings(&shape, m).into_iter().filter(Tableau::is_standard).collect();
                    brute.sort();
                    let mut fast = standard_fillings(&shape, m, None);
                    fast.sort();
                    assert_eq!(brute, fast, "m={m} shape={:?}", shape.rows());
                }
            }
        }
    }

    #[test]
    fn straightening_examples() {
        let s = straighten(&dt(&[&[1, 2]], &[&[1, 2]]), 2, None).unwrap();
        assert_eq!(s.terms.len(), 1);
        assert_eq!(s.terms[0].coef, integer(1));

        let input = dt(&[&[1], &[2]], &[&[2], &[1]]);
        let s = straighten(&input, 2, None).unwrap();
        assert_eq!(
            s.terms,
            vec![
                ExpansionTerm { coef: integer(1), tableau: dt(&[&[1], &[2]], &[&[1], &[2]]) },
                ExpansionTerm { coef: integer(-1), tableau: dt(&[&[1, 2]], &[&[1, 2]]) },
            ]
        );
        assert_eq!(s.reexpand(2).unwrap(), bideterminant(&input, 2).unwrap());

        let s = straighten(&input, 2, Some(1)).unwrap();
        assert_eq!(s.terms, vec![ExpansionTerm { coef: integer(1), tableau: dt(&[&[1], &[2]], &[&[1], &[2]]) }]);
    }

    #[test]
    fn membership_examples() {
        assert!(subalgebra_membership(&minor(2, &[1, 2], &[1, 2]), 2, 2).unwrap().is_member());
        let m = subalgebra_membership(&(&x(2, 1, 1) * &x(2, 2, 2)), 2, 2).unwrap();
        assert!(matches!(m, Membership::NotMember { ref witness, .. } if witness.rows() == [1, 1]));
        assert!(subalgebra_membership(&x(2, 1, 1), 2, 1).unwrap().is_member());
        assert!(subalgebra_membership(&MultiPoly::zero(2), 2, 2).unwrap().is_member());
        assert!(subalgebra_membership(&x(2, 1, 1), 2, 2).is_err());
        assert!(subalgebra_membership(&(&x(2, 1, 1) + &MultiPoly::one(2)), 2, 1).is_err());
    }

    #[test]
    fn quotient_division() {
        let mut st = Straightener::new(3, Guard::default());
        // x11 · (x11 x22 - x12 x21) ≡ x11² x22 - x11 x12 x21 and is 0 mod I_2
        let det = minor(3, &[1, 2], &[1, 2]);
        let g = &x(3, 1, 1) * &det;
        assert_eq!(st.divide_in_quotient(&g, &x(3, 1, 1), 2).unwrap(), Some(det.clone()));
        let q = st.divide_in_quotient(&g, &x(3, 1, 1), 1).unwrap().unwrap();
        assert!(st.project(&q, 1).unwrap().is_zero());
        // modulo I_2, x11 · x22 ≡ x12 · x21, so x12 x21 / x11 = x22
        let q = st.divide_in_quotient(&(&x(3, 1, 2) * &x(3, 2, 1)), &x(3, 1, 1), 1).unwrap().unwrap();
        assert_eq!(st.normal_form(&q, 1).unwrap(), st.normal_form(&x(3, 2, 2), 1).unwrap());
        assert_eq!(st.divide_in_quotient(&x(3, 2, 2), &x(3, 1, 1), 1).unwrap(), None);
    }

    #[test]
    fn standard_basis_is_a_basis() {
        for m in 1..=3 {
            for d in 1..=3 {
                let basis = enumerate_standard_basis(m, None, &BasisSpec::Degree(d), Guard::default()).unwrap();
                // as many standard bideterminants as monomials of degree d in m² variables
                let monomials = (0..m * m).combinations_with_replacement(d).count();
                assert_eq!(basis.len(), monomials);
                let rows: Vec<Vec<Rational>> = {
                    let polys: Vec<MultiPoly> = basis.iter().map(|b| bideterminant(b, m).unwrap()).collect();
                    let keys: Vec<Exponent> = polys.iter().flat_map(|p| p.terms().keys().cloned()).sorted().dedup().collect();
                    polys.iter().map(|p| keys.iter().map(|k| p.coefficient(k)).collect()).collect()
                };
                assert_eq!(crate::linalg::rank(&rows), basis.len());
            }
        }
    }

    #[test]
    fn tableau_order_refines_dominance() {
        for m in 1..=3 {
            for size in 1..=4 {
                let all: Vec<Tableau> = partitions(size, usize::MAX).iter().flat_map(|s| all_fillings(s, m)).collect();
                for a in &all {
                    for b in &all {
                        if tableau_leq(a, b) {
                            assert!(dominance_leq(&a.shape(), &b.shape()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn double_order_is_componentwise() {
        let a = dt(&[&[1, 3]], &[&[1, 2]]);
        let b = dt(&[&[1, 2]], &[&[1, 2]]);
        assert!(double_tableau_leq(&a, &b));
        assert!(!double_tableau_leq(&b, &a));
    }
}
