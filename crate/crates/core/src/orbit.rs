//! Arithmetic on extended partitions: which `(GL_m × GL_m)_∞`-orbits lie in
//! the arc space of `D^k`, their contact orders along the determinantal
//! subvarieties and the Nash ideal, and their codimensions.
//!
//! The contact order of `C_λ` along `D^{k-i}` (cut out by the minors of size
//! `k - i + 1`) is `λ_{m-k+i} + … + λ_m`. Note the starting index `m-k+i`:
//! that is what the minor-order formula `ord(I_s) = λ_{m-s+1} + … + λ_m`
//! gives for `s = k - i + 1`, and what the power-series oracle confirms.

use crate::error::{reject, Result};
use crate::pairs::{DeterminantalPair, ExtendedPartition, Order};

fn check_len(lambda: &ExtendedPartition, pair: &DeterminantalPair) -> Result<()> {
    if lambda.len() != pair.m() {
        reject!("partition has length {} but the pair has m = {}", lambda.len(), pair.m());
    }
    Ok(())
}

fn require_in_jet_space(lambda: &ExtendedPartition, pair: &DeterminantalPair) -> Result<()> {
    if !orbit_in_jet_space(lambda, pair)? {
        reject!(
            "orbit {lambda} is not contained in the arc space of D^{} (first m-k = {} entries must be inf)",
            pair.k(),
            pair.m() - pair.k()
        );
    }
    Ok(())
}

fn require_finite_codim(lambda: &ExtendedPartition, pair: &DeterminantalPair) -> Result<()> {
    if !orbit_has_finite_codim(lambda, pair)? {
        reject!("orbit {lambda} has infinite codimension in the arc space of D^{}", pair.k());
    }
    Ok(())
}

/// `C_λ ⊂ D^k_∞` iff `λ_1 = … = λ_{m-k} = ∞`.
pub fn orbit_in_jet_space(lambda: &ExtendedPartition, pair: &DeterminantalPair) -> Result<bool> {
    check_len(lambda, pair)?;
    let prefix = pair.m() - pair.k();
    Ok(lambda.entries()[..prefix].iter().all(|e| *e == Order::Inf))
}

/// Finite codimension iff `λ_{m-k+1} < ∞`.
pub fn orbit_has_finite_codim(lambda: &ExtendedPartition, pair: &DeterminantalPair) -> Result<bool> {
    require_in_jet_space(lambda, pair)?;
    Ok(lambda.part(pair.m() - pair.k() + 1).is_finite())
}

/// Whether `C_λ` meets the arcs through the rank-`q` matrix `x_q`:
/// `λ_1, …, λ_{m-q} > 0` and `λ_{m-q+1} = … = λ_m = 0`.
pub fn orbit_meets_point_fiber(lambda: &ExtendedPartition, pair: &DeterminantalPair, q: usize) -> Result<bool> {
    if q > pair.k() {
        reject!("point rank q = {q} exceeds k = {}", pair.k());
    }
    require_in_jet_space(lambda, pair)?;
    let split = pair.m() - q;
    let e = lambda.entries();
    Ok(e[..split].iter().all(|x| x.is_positive()) && e[split..].iter().all(|x| *x == Order::Finite(0)))
}

/// `w_i = ord_{δ_λ}(I_{k-i+1}) = λ_{m-k+i} + … + λ_m`, the contact order
/// along `D^{k-i}`.
pub fn contact_order_subvariety(lambda: &ExtendedPartition, pair: &DeterminantalPair, i: usize) -> Result<Order> {
    if i < 1 || i > pair.k() {
        reject!("subvariety index i = {i} outside 1..={}", pair.k());
    }
    require_in_jet_space(lambda, pair)?;
    let start = pair.m() - pair.k() + i;
    Ok(lambda.entries()[start - 1..].iter().copied().sum())
}

/// Contact order along the Nash ideal, `(m-k)(λ_{m-k+1} + … + λ_m)`, using
/// that the Nash ideal and `I_k^{m-k}` have the same integral closure.
pub fn nash_contact_order(lambda: &ExtendedPartition, pair: &DeterminantalPair) -> Result<Order> {
    require_in_jet_space(lambda, pair)?;
    let (m, k) = (pair.m(), pair.k());
    if k == m {
        return Ok(Order::Finite(0));
    }
    let w1: Order = lambda.entries()[m - k..].iter().copied().sum();
    Ok(w1.scale((m - k) as u64))
}

/// Codimension of `C_λ` in `D^k_∞`: `Σ_{i=m-k+1}^{m} (2i-1) λ_i`.
pub fn orbit_codim(lambda: &ExtendedPartition, pair: &DeterminantalPair) -> Result<u64> {
    require_finite_codim(lambda, pair)?;
    let (m, k) = (pair.m(), pair.k());
    let codim = (m - k + 1..=m)
        .map(|i| {
            let part = lambda.part(i).finite().expect("tail entries are finite once λ_{m-k+1} is");
            (2 * i as u64 - 1) * part
        })
        .sum();
    Ok(codim)
}

/// Codimension of `C_λ ∩ Cont^{≥1}(x_q)`: the orbit codimension plus the
/// dimension `q(2m-q)` of the rank-`q` stratum.
pub fn orbit_codim_point(lambda: &ExtendedPartition, pair: &DeterminantalPair, q: usize) -> Result<u64> {
    if !orbit_meets_point_fiber(lambda, pair, q)? {
        reject!("orbit {lambda} does not meet the arcs through a rank-{q} point");
    }
    let codim = orbit_codim(lambda, pair)?;
    let m = pair.m() as u64;
    let q = q as u64;
    Ok(q * (2 * m - q) + codim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::Order::{Finite as F, Inf};
    use proptest::prelude::*;

    fn lam(entries: &[Order]) -> ExtendedPartition {
        ExtendedPartition::new(entries.to_vec()).unwrap()
    }

    fn pair(m: usize, k: usize) -> DeterminantalPair {
        DeterminantalPair::bare(m, k).unwrap()
    }

    #[test]
    fn jet_space_membership() {
        assert!(orbit_in_jet_space(&lam(&[Inf, F(1), F(0)]), &pair(3, 2)).unwrap());
        assert!(!orbit_in_jet_space(&lam(&[F(2), F(1), F(0)]), &pair(3, 2)).unwrap());
        assert!(orbit_in_jet_space(&lam(&[F(3), F(1)]), &pair(2, 2)).unwrap());
        assert!(orbit_in_jet_space(&lam(&[F(3)]), &pair(3, 2)).is_err());
    }

    #[test]
    fn finite_codimension() {
        assert!(orbit_has_finite_codim(&lam(&[Inf, F(1), F(0)]), &pair(3, 2)).unwrap());
        assert!(!orbit_has_finite_codim(&lam(&[Inf, Inf, F(0)]), &pair(3, 2)).unwrap());
        assert!(orbit_has_finite_codim(&lam(&[Inf, F(0), F(0)]), &pair(3, 2)).unwrap());
        assert!(orbit_has_finite_codim(&lam(&[F(1), F(0), F(0)]), &pair(3, 2)).is_err());
    }

    #[test]
    fn point_fibers() {
        assert!(orbit_meets_point_fiber(&lam(&[Inf, F(1), F(0)]), &pair(3, 2), 1).unwrap());
        assert!(!orbit_meets_point_fiber(&lam(&[Inf, F(1), F(1)]), &pair(3, 2), 1).unwrap());
        assert!(orbit_meets_point_fiber(&lam(&[Inf, Inf, F(1), F(0), F(0)]), &pair(5, 3), 2).unwrap());
        assert!(orbit_meets_point_fiber(&lam(&[Inf, F(1), F(0)]), &pair(3, 2), 3).is_err());
    }

    #[test]
    fn contact_orders() {
        let l = lam(&[Inf, F(2), F(1)]);
        let p = pair(3, 2);
        assert_eq!(contact_order_subvariety(&l, &p, 1).unwrap(), F(3));
        assert_eq!(contact_order_subvariety(&l, &p, 2).unwrap(), F(1));
        assert_eq!(contact_order_subvariety(&lam(&[Inf, F(0), F(0)]), &p, 1).unwrap(), F(0));
        assert!(contact_order_subvariety(&l, &p, 0).is_err());
        assert!(contact_order_subvariety(&l, &p, 3).is_err());
        assert_eq!(contact_order_subvariety(&lam(&[Inf, Inf, F(0)]), &p, 1).unwrap(), Inf);
    }

    #[test]
    fn nash_orders() {
        assert_eq!(nash_contact_order(&lam(&[Inf, F(2), F(1)]), &pair(3, 2)).unwrap(), F(3));
        assert_eq!(nash_contact_order(&lam(&[Inf, Inf, F(1), F(1)]), &pair(4, 2)).unwrap(), F(4));
        assert_eq!(nash_contact_order(&lam(&[F(1), F(1)]), &pair(2, 2)).unwrap(), F(0));
    }

    #[test]
    fn codimensions() {
        let p = pair(3, 2);
        assert_eq!(orbit_codim(&lam(&[Inf, F(2), F(1)]), &p).unwrap(), 11);
        assert_eq!(orbit_codim(&lam(&[Inf, F(1), F(0)]), &p).unwrap(), 3);
        assert_eq!(orbit_codim(&lam(&[Inf, F(0), F(0)]), &p).unwrap(), 0);
        assert!(orbit_codim(&lam(&[Inf, Inf, F(0)]), &p).is_err());

        assert_eq!(orbit_codim_point(&lam(&[Inf, F(1), F(0)]), &p, 1).unwrap(), 8);
        // λ_3 carries weight 2·3 - 1 = 5, so 2·8 + 5
        assert_eq!(orbit_codim_point(&lam(&[Inf, Inf, F(1), F(0), F(0)]), &pair(5, 3), 2).unwrap(), 21);
        assert_eq!(orbit_codim_point(&lam(&[F(1), F(1), F(1)]), &pair(3, 3), 0).unwrap(), 9);
        assert!(orbit_codim_point(&lam(&[Inf, F(1), F(1)]), &p, 1).is_err());
    }

    /// Random orbit in `D^k_∞` with finite codimension: `m-k` infinities
    /// followed by a sorted tail.
    fn arb_orbit() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
        (1usize..=6)
            .prop_flat_map(|m| (Just(m), 1usize..=m))
            .prop_flat_map(|(m, k)| (Just(m), Just(k), proptest::collection::vec(0u64..5, k)))
            .prop_map(|(m, k, mut tail)| {
                tail.sort_unstable_by(|a, b| b.cmp(a));
                (m, k, tail)
            })
    }

    proptest! {
        #[test]
        fn point_codim_offset_is_stratum_dimension((m, k, mut tail) in arb_orbit(), q_seed in 0usize..7) {
            let q = q_seed % (k + 1);
            // force the point-fiber shape: positive entries, then q zeros
            for (idx, v) in tail.iter_mut().enumerate() {
                if idx >= k - q { *v = 0 } else if *v == 0 { *v = 1 }
            }
            tail.sort_unstable_by(|a, b| b.cmp(a));
            let l = ExtendedPartition::with_infinite_prefix(m - k, &tail).unwrap();
            let p = pair(m, k);
            prop_assert!(orbit_meets_point_fiber(&l, &p, q).unwrap());
            let diff = orbit_codim_point(&l, &p, q).unwrap() - orbit_codim(&l, &p).unwrap();
            prop_assert_eq!(diff, (q * (2 * m - q)) as u64);
        }

        #[test]
        fn contact_orders_are_convex((m, k, tail) in arb_orbit()) {
            let l = ExtendedPartition::with_infinite_prefix(m - k, &tail).unwrap();
            let p = pair(m, k);
            let w: Vec<u64> = (1..=k)
                .map(|i| contact_order_subvariety(&l, &p, i).unwrap().finite().unwrap())
                .collect();
            for i in 0..k {
                let next = if i + 1 < k { w[i + 1] } else { 0 };
                prop_assert!(w[i] >= next);
                prop_assert_eq!(w[i] - next, tail[i]);
            }
            let nash = nash_contact_order(&l, &p).unwrap().finite().unwrap();
            prop_assert_eq!(nash, (m - k) as u64 * w[0]);
        }
    }
}
