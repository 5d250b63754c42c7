//! Exact linear algebra over the rationals: dense rank and an incremental
//! sparse echelon form used to express vectors in a spanning family.

use std::collections::BTreeMap;

use num::Zero;

use crate::pairs::Rational;

/// Rank of a dense matrix given as rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for cc in c..ncols {
                let delta = &f * &a[r][cc];
                a[i][cc] -= delta;
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

pub type SparseVec<K> = BTreeMap<K, Rational>;

fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Rational, x: &SparseVec<K>) {
    for (k, v) in x {
        let entry = y.entry(k.clone()).or_insert_with(Rational::zero);
        *entry += a * v;
        if entry.is_zero() {
            y.remove(k);
        }
    }
}

/// Row echelon form built one vector at a time. Each stored row remembers
/// how it was formed from the inserted vectors, so a vector in the span can
/// be written back in terms of the originals.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: Vec<(K, SparseVec<K>, SparseVec<usize>)>,
    inserted: usize,
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        SparseEchelon { rows: Vec::new(), inserted: 0 }
    }

    #[cfg(test)]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Eliminates every pivot from `v`, accumulating the multiples used.
    fn reduce(&self, v: &mut SparseVec<K>, combo: &mut SparseVec<usize>) {
        // a stored row contains no earlier pivot, so one pass in insertion
        // order clears them all
        for (pivot, row, row_combo) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                let neg = -c;
                axpy(v, &neg, row);
                axpy(combo, &neg, row_combo);
            }
        }
    }

    /// Adds the next vector (its index is the number inserted so far).
    /// Returns `false` if it was already in the span.
    pub fn insert(&mut self, mut v: SparseVec<K>) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = SparseVec::new();
        combo.insert(idx, Rational::from_integer(1.into()));
        self.reduce(&mut v, &mut combo);
        let Some((pivot, lead)) = v.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.recip();
        for c in v.values_mut() {
            *c *= &inv;
        }
        for c in combo.values_mut() {
            *c *= &inv;
        }
        self.rows.push((pivot, v, combo));
        true
    }

    /// Coefficients `c` with `target = Σ c_i · inserted_i`, or `None` if the
    /// target is outside the span. Unique when the inserted vectors are
    /// independent.
    pub fn express(&self, target: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let mut v = target.clone();
        let mut combo = SparseVec::new();
        self.reduce(&mut v, &mut combo);
        if !v.is_empty() {
            return None;
        }
        // reduce() subtracted; the target is the negation of what was removed
        Some(combo.into_iter().map(|(k, c)| (k, -c)).collect())
    }
}
