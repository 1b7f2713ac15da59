//! Finite spectra as Alexandrov spaces of the inclusion order: closed sets are
//! up-sets, open sets are down-sets, the closure of a point is its up-set.

use std::collections::HashSet;
use std::fmt;

use crate::bitset::BitSet;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ideal::GradedIdeal;
use crate::ring::GradedRing;

/// A finite partial order. `up[i]` holds every j with i ≤ j (including i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    up: Vec<BitSet>,
}

pub type SpectralSpace = Poset;

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset{:?}", self.covers())
    }
}

impl Poset {
    /// Validates reflexivity, antisymmetry and transitivity of `le`.
    pub fn from_relation(n: usize, le: impl Fn(usize, usize) -> bool) -> Result<Poset> {
        let up: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, (0..n).filter(|&j| le(i, j)))).collect();
        let p = Poset { n, up };
        for i in 0..n {
            if !p.le(i, i) {
                return Err(Error::invalid(format!("relation not reflexive at {i}")));
            }
            for j in p.up[i].iter() {
                if j != i && p.le(j, i) {
                    return Err(Error::invalid(format!("relation not antisymmetric at ({i}, {j})")));
                }
                if !p.up[j].is_subset(&p.up[i]) {
                    return Err(Error::invalid(format!("relation not transitive through {j}")));
                }
            }
        }
        Ok(p)
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_relation(n, |i, j| i == j).unwrap()
    }

    pub fn chain(n: usize) -> Poset {
        Poset::from_relation(n, |i, j| i <= j).unwrap()
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn up(&self, i: usize) -> &BitSet {
        &self.up[i]
    }

    pub fn down(&self, i: usize) -> BitSet {
        BitSet::from_indices(self.n, (0..self.n).filter(|&j| self.le(j, i)))
    }

    pub fn up_closure(&self, s: &BitSet) -> BitSet {
        s.iter().fold(BitSet::new(self.n), |acc, i| acc.union(&self.up[i]))
    }

    pub fn down_closure(&self, s: &BitSet) -> BitSet {
        s.iter().fold(BitSet::new(self.n), |acc, i| acc.union(&self.down(i)))
    }

    pub fn is_up_set(&self, s: &BitSet) -> bool {
        s.iter().all(|i| self.up[i].is_subset(s))
    }

    pub fn is_down_set(&self, s: &BitSet) -> bool {
        s.iter().all(|i| self.down(i).is_subset(s))
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.up[i].count() == 1).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.down(i).count() == 1).collect()
    }

    /// Maximal points above `i`.
    pub fn max_over(&self, i: usize) -> Vec<usize> {
        self.maximal().into_iter().filter(|&m| self.le(i, m)).collect()
    }

    /// Covering pairs (i, j): i < j with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = vec![];
        for i in 0..self.n {
            for j in self.up[i].iter() {
                if j != i && !self.up[i].iter().any(|k| k != i && k != j && self.le(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_discrete(&self) -> bool {
        self.up.iter().all(|u| u.count() == 1)
    }

    pub fn is_chain_set(&self, s: &BitSet) -> bool {
        s.iter().all(|i| s.iter().all(|j| self.le(i, j) || self.le(j, i)))
    }

    /// The induced order on the listed points.
    pub fn restrict(&self, pts: &[usize]) -> Poset {
        Poset::from_relation(pts.len(), |a, b| self.le(pts[a], pts[b])).expect("suborders are partial orders")
    }

    /// Order isomorphism check for a given bijection `f`.
    pub fn is_isomorphism(&self, other: &Poset, f: &[usize]) -> bool {
        self.n == other.n
            && f.iter().collect::<HashSet<_>>().len() == self.n
            && (0..self.n).all(|i| (0..self.n).all(|j| self.le(i, j) == other.le(f[i], f[j])))
    }
}

pub fn is_closed(p: &Poset, pts: &BitSet) -> bool {
    p.is_up_set(pts)
}

pub fn is_open(p: &Poset, pts: &BitSet) -> bool {
    p.is_down_set(pts)
}

pub fn closure(p: &Poset, pts: &BitSet) -> BitSet {
    p.up_closure(pts)
}

/// C(P) = ↑P ∪ ↓P.
pub fn c_set(p: &Poset, i: usize) -> BitSet {
    p.up(i).union(&p.down(i))
}

/// Edge count of the longest chain; 0 for antichains and the empty poset.
pub fn poset_height(p: &Poset) -> usize {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(p.down(i).count()));
    let mut h = vec![0usize; p.len()];
    for &i in order.iter().rev() {
        h[i] = p.down(i).iter().filter(|&j| j != i).map(|j| h[j] + 1).max().unwrap_or(0);
    }
    h.into_iter().max().unwrap_or(0)
}

/// Point rule: a violation is (P, Q, R) with ↑P ∩ ↑Q = ∅ and R ∈ ↓↑P ∩ ↓↑Q.
pub fn normality_violation(p: &Poset) -> Option<(usize, usize, usize)> {
    let downs: Vec<BitSet> = (0..p.len()).map(|i| p.down_closure(p.up(i))).collect();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p.up(i).is_disjoint(p.up(j)) {
                if let Some(r) = downs[i].intersection(&downs[j]).iter().next() {
                    return Some((i, j, r));
                }
            }
        }
    }
    None
}

pub fn is_normal(p: &Poset) -> bool {
    normality_violation(p).is_none()
}

fn masks(p: &Poset) -> Vec<u64> {
    assert!(p.len() <= 16, "brute-force oracles are for small posets");
    (0..p.len()).map(|i| p.up(i).iter().fold(0u64, |m, j| m | 1 << j)).collect()
}

fn all_subsets_where(n: usize, ok: impl Fn(u64) -> bool) -> Vec<u64> {
    (0..1u64 << n).filter(|&s| ok(s)).collect()
}

/// Normality by definition: every pair of disjoint closed sets has disjoint open
/// neighbourhoods, searched over all up-set and down-set pairs.
pub fn is_normal_brute(p: &Poset) -> bool {
    let n = p.len();
    let up = masks(p);
    let is_up = |s: u64| (0..n).all(|i| s >> i & 1 == 0 || up[i] & !s == 0);
    let is_down = |s: u64| (0..n).all(|j| s >> j & 1 == 0 || (0..n).all(|i| up[i] >> j & 1 == 0 || s >> i & 1 == 1));
    let ups = all_subsets_where(n, is_up);
    let mut downs = all_subsets_where(n, is_down);
    downs.sort_by_key(|s| s.count_ones());
    for &a in &ups {
        for &b in &ups {
            if a & b != 0 {
                continue;
            }
            let separated = downs.iter().filter(|&&u| u & a == a).any(|&u| {
                downs.iter().any(|&v| v & b == b && u & v == 0)
            });
            if !separated {
                return false;
            }
        }
    }
    true
}

/// The retraction P ↦ unique maximal point above P, when every point has one.
pub fn retraction_to_max(p: &Poset) -> Option<Vec<usize>> {
    (0..p.len())
        .map(|i| match p.max_over(i).as_slice() {
            [m] => Some(*m),
            _ => None,
        })
        .collect()
}

/// Order-preserving maps onto the maximal points, fixing them, by exhaustive search.
pub fn retraction_brute(p: &Poset) -> Option<Vec<usize>> {
    let maxes = p.maximal();
    let others: Vec<usize> = (0..p.len()).filter(|i| !maxes.contains(i)).collect();
    let total = maxes.len().checked_pow(others.len() as u32)?;
    let mut f: Vec<usize> = (0..p.len()).collect();
    for code in 0..total {
        let mut c = code;
        for &o in &others {
            f[o] = maxes[c % maxes.len()];
            c /= maxes.len();
        }
        let monotone = (0..p.len()).all(|i| p.up(i).iter().all(|j| p.le(f[i], f[j])));
        if monotone {
            return Some(f);
        }
    }
    None
}

/// Checks that `f` is an order-preserving map onto the maximal points fixing each.
pub fn is_retraction(p: &Poset, f: &[usize]) -> bool {
    let maxes = p.maximal();
    f.len() == p.len()
        && (0..p.len()).all(|i| maxes.contains(&f[i]) && p.le(i, f[i]))
        && maxes.iter().all(|&m| f[m] == m)
        && (0..p.len()).all(|i| p.up(i).iter().all(|j| p.le(f[i], f[j])))
}

// ----- exhaustive generation up to isomorphism --------------------------------------

#[derive(Clone)]
struct Small {
    n: usize,
    /// down[i]: bitmask of j ≤ i.
    down: Vec<u8>,
}

impl Small {
    fn le(&self, i: usize, j: usize) -> bool {
        self.down[j] >> i & 1 == 1
    }

    fn code(&self, perm: &[usize]) -> u64 {
        let mut c = 0u64;
        for i in 0..self.n {
            for j in 0..self.n {
                if self.le(i, j) {
                    c |= 1 << (perm[i] * self.n + perm[j]);
                }
            }
        }
        c
    }

    fn canonical(&self) -> u64 {
        let sig: Vec<(u32, u32)> = (0..self.n)
            .map(|i| {
                let ups = (0..self.n).filter(|&j| self.le(i, j)).count() as u32;
                (self.down[i].count_ones(), ups)
            })
            .collect();
        let mut points: Vec<usize> = (0..self.n).collect();
        points.sort_by_key(|&i| sig[i]);
        let mut best = u64::MAX;
        let mut perm = vec![0usize; self.n];
        let mut used = vec![false; self.n];
        self.search(&points, &sig, 0, &mut perm, &mut used, &mut best);
        best
    }

    /// Assigns positions slot by slot; a point may take slot k only if its signature
    /// matches the signature sorted into slot k.
    fn search(
        &self,
        points: &[usize],
        sig: &[(u32, u32)],
        slot: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut u64,
    ) {
        if slot == self.n {
            *best = (*best).min(self.code(perm));
            return;
        }
        let want = sig[points[slot]];
        for &i in points {
            if !used[i] && sig[i] == want {
                used[i] = true;
                perm[i] = slot;
                self.search(points, sig, slot + 1, perm, used, best);
                used[i] = false;
            }
        }
    }

    fn down_sets(&self) -> Vec<u8> {
        (0..1u16 << self.n)
            .map(|s| s as u8)
            .filter(|&s| (0..self.n).all(|i| s >> i & 1 == 0 || self.down[i] & !s == 0))
            .collect()
    }

    fn to_poset(&self) -> Poset {
        Poset::from_relation(self.n, |i, j| self.le(i, j)).expect("generated relations are partial orders")
    }
}

/// All posets on `n` points up to isomorphism, for n ≤ 8.
pub fn all_posets(n: usize) -> Vec<Poset> {
    assert!(n <= 8, "exhaustive generation is limited to 8 points");
    let mut level = vec![Small { n: 0, down: vec![] }];
    for k in 0..n {
        let mut seen = HashSet::new();
        let mut next = vec![];
        for p in &level {
            for d in p.down_sets() {
                let mut down = p.down.clone();
                down.push(d | 1 << k);
                let q = Small { n: k + 1, down };
                if seen.insert(q.canonical()) {
                    next.push(q);
                }
            }
        }
        level = next;
    }
    level.iter().map(Small::to_poset).collect()
}

// ----- ring-level opens and closed sets ---------------------------------------------

/// V_G(I): spectrum points containing I.
pub fn v_g(ring: &GradedRing, ideal: &GradedIdeal) -> Result<BitSet> {
    let spec = ring.spectrum()?;
    Ok(BitSet::from_indices(
        spec.len(),
        (0..spec.len()).filter(|&i| ring.ideal_le(ideal, &spec.primes[i])),
    ))
}

/// D_G(r): spectrum points not containing the homogeneous element r.
pub fn d_g(ring: &GradedRing, r: &Element) -> Result<BitSet> {
    if ring.is_homogeneous(r).is_none() {
        return Err(Error::NotHomogeneous(r.clone()));
    }
    let spec = ring.spectrum()?;
    Ok(BitSet::from_indices(
        spec.len(),
        (0..spec.len()).filter(|&i| !ring.contains(&spec.primes[i], r)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vee() -> Poset {
        // 0 below 1 and 2
        Poset::from_relation(3, |i, j| i == j || i == 0).unwrap()
    }

    #[test]
    fn poset_counts_match_known_sequence() {
        let counts: Vec<usize> = (0..=6).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63, 318]);
    }

    #[test]
    fn vee_is_not_normal_and_has_no_retraction() {
        let p = vee();
        assert_eq!(normality_violation(&p), Some((1, 2, 0)));
        assert!(!is_normal_brute(&p));
        assert!(retraction_to_max(&p).is_none());
        assert!(retraction_brute(&p).is_none());
        assert_eq!(poset_height(&p), 1);
    }

    #[test]
    fn chain_and_antichain() {
        let c = Poset::chain(3);
        assert!(is_normal(&c) && is_normal_brute(&c));
        assert_eq!(retraction_to_max(&c), Some(vec![2, 2, 2]));
        assert_eq!(poset_height(&c), 2);
        assert_eq!(c_set(&c, 1).count(), 3);
        let a = Poset::antichain(3);
        assert_eq!(poset_height(&a), 0);
        assert_eq!(retraction_to_max(&a), Some(vec![0, 1, 2]));
        assert!(a.is_discrete());
    }

    #[test]
    fn c_set_of_vee_is_not_closed() {
        let p = vee();
        let c = c_set(&p, 1);
        assert_eq!(c.to_vec(), vec![0, 1]);
        assert!(!is_closed(&p, &c));
    }

    #[test]
    fn invalid_relation_rejected() {
        assert!(Poset::from_relation(2, |_, _| true).is_err());
        assert!(Poset::from_relation(3, |i, j| i == j || (i, j) == (0, 1) || (i, j) == (1, 2)).is_err());
    }
}
