//! The finite table layer: rings given by explicit addition and multiplication
//! tables on a carrier `0..n`, with an explicit homogeneous decomposition.
//!
//! Everything here is exhaustive and therefore authoritative.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::bitset::BitSet;
use crate::degree::{Degree, GradingGroup};
use crate::error::{Error, Result};

/// Carrier size above which user-supplied tables are rejected.
pub const MAX_TABLE: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    n: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    zero: usize,
    one: usize,
    grading: GradingGroup,
    /// Nonzero homogeneous components of each element, sorted by degree.
    comps: Vec<Vec<(Degree, usize)>>,
    /// Degree of each homogeneous element (zero has degree e).
    degree: Vec<Option<Degree>>,
}

impl FiniteRing {
    /// Builds a ring from tables and a component map. `comps[a]` lists the nonzero
    /// homogeneous components of `a`; an empty list is only valid for zero.
    /// With `check` set, every ring and grading axiom is verified exhaustively.
    pub fn from_tables(
        n: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        grading: GradingGroup,
        comps: Option<Vec<Vec<(Degree, usize)>>>,
        check: bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("empty carrier"));
        }
        if add.len() != n * n || mul.len() != n * n {
            return Err(Error::invalid(format!("tables must have {} entries", n * n)));
        }
        if add.iter().chain(&mul).any(|&x| x as usize >= n) {
            return Err(Error::invalid("table entry outside the carrier"));
        }
        let zero = (0..n)
            .find(|&z| (0..n).all(|a| add[z * n + a] as usize == a))
            .ok_or_else(|| Error::invalid("no additive identity"))?;
        let one = (0..n)
            .find(|&u| (0..n).all(|a| mul[u * n + a] as usize == a))
            .ok_or_else(|| Error::invalid("no multiplicative identity"))?;
        let mut neg = vec![0u32; n];
        for a in 0..n {
            neg[a] = (0..n)
                .find(|&b| add[a * n + b] as usize == zero)
                .ok_or_else(|| Error::invalid(format!("element {a} has no additive inverse")))?
                as u32;
        }
        let comps = match comps {
            Some(c) => c,
            None => {
                if !grading.is_trivial() {
                    return Err(Error::invalid("graded table needs components"));
                }
                (0..n)
                    .map(|a| if a == zero { vec![] } else { vec![(grading.zero(), a)] })
                    .collect()
            }
        };
        if comps.len() != n {
            return Err(Error::invalid("one component list per element required"));
        }
        let mut ring = FiniteRing {
            n,
            add,
            mul,
            neg,
            zero,
            one,
            grading,
            comps: vec![],
            degree: vec![],
        };
        let mut cleaned = Vec::with_capacity(n);
        for (a, list) in comps.into_iter().enumerate() {
            let mut m: BTreeMap<Degree, usize> = BTreeMap::new();
            for (d, c) in list {
                if !ring.grading.contains(&d) {
                    return Err(Error::invalid(format!("degree {d:?} not in {}", ring.grading)));
                }
                if c >= n {
                    return Err(Error::invalid("component outside the carrier"));
                }
                if c == zero {
                    continue;
                }
                if m.insert(d, c).is_some() {
                    return Err(Error::invalid(format!("element {a} has a repeated degree")));
                }
            }
            cleaned.push(m.into_iter().collect::<Vec<_>>());
        }
        ring.comps = cleaned;
        ring.degree = (0..n)
            .map(|a| match ring.comps[a].as_slice() {
                [] => Some(ring.grading.zero()),
                [(d, _)] => Some(d.clone()),
                _ => None,
            })
            .collect();
        if check {
            ring.check_ring_axioms()?;
            ring.check_grading()?;
        }
        Ok(ring)
    }

    pub fn check_ring_axioms(&self) -> Result<()> {
        let n = self.n;
        for a in 0..n {
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return Err(Error::invalid(format!("addition not commutative at ({a},{b})")));
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::invalid(format!("multiplication not commutative at ({a},{b})")));
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(Error::invalid(format!("addition not associative at ({a},{b},{c})")));
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::invalid(format!(
                            "multiplication not associative at ({a},{b},{c})"
                        )));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(Error::invalid(format!("distributivity fails at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Components sum to the element, components are homogeneous of their degree,
    /// projections are additive, and R_g R_h lies in R_{g+h}.
    pub fn check_grading(&self) -> Result<()> {
        for a in 0..self.n {
            let sum = self.comps[a].iter().fold(self.zero, |acc, &(_, c)| self.add(acc, c));
            if sum != a {
                return Err(Error::invalid(format!("components of {a} do not sum to it")));
            }
            for (d, c) in &self.comps[a] {
                if self.degree[*c].as_ref() != Some(d) {
                    return Err(Error::invalid(format!("component {c} of {a} is not homogeneous of degree {d:?}")));
                }
            }
        }
        let degrees: BTreeSet<Degree> =
            self.comps.iter().flat_map(|l| l.iter().map(|(d, _)| d.clone())).collect();
        for a in 0..self.n {
            for b in 0..self.n {
                let s = self.add(a, b);
                for d in &degrees {
                    if self.component(s, d) != self.add(self.component(a, d), self.component(b, d)) {
                        return Err(Error::invalid(format!("projection to {d:?} is not additive")));
                    }
                }
                if let (Some(g), Some(h)) = (&self.degree[a], &self.degree[b]) {
                    let p = self.mul(a, b);
                    let gh = self.grading.add(g, h);
                    if p != self.zero && self.degree[p].as_ref() != Some(&gh) {
                        return Err(Error::invalid(format!("product of homogeneous {a},{b} escapes degree {gh:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn grading(&self) -> &GradingGroup {
        &self.grading
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: usize, e: u32) -> usize {
        (0..e).fold(self.one, |acc, _| self.mul(acc, a))
    }

    pub fn components(&self, a: usize) -> &[(Degree, usize)] {
        &self.comps[a]
    }

    pub fn component(&self, a: usize, d: &Degree) -> usize {
        self.comps[a]
            .iter()
            .find(|(e, _)| e == d)
            .map(|&(_, c)| c)
            .unwrap_or(self.zero)
    }

    pub fn degree_of(&self, a: usize) -> Option<&Degree> {
        self.degree[a].as_ref()
    }

    pub fn homogeneous(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.degree[a].is_some()).collect()
    }

    pub fn support(&self) -> BTreeSet<Degree> {
        self.comps.iter().flat_map(|l| l.iter().map(|(d, _)| d.clone())).collect()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.n == 1
    }

    pub fn is_nilpotent(&self, a: usize) -> bool {
        let mut seen = BitSet::new(self.n);
        let mut x = a;
        loop {
            if x == self.zero {
                return true;
            }
            if !seen.insert(x) {
                return false;
            }
            x = self.mul(x, a);
        }
    }

    pub fn inverse(&self, a: usize) -> Option<usize> {
        (0..self.n).find(|&b| self.mul(a, b) == self.one)
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.inverse(a).is_some()
    }

    pub fn is_domain(&self) -> bool {
        self.n > 1
            && (0..self.n).all(|a| {
                a == self.zero || (0..self.n).all(|b| b == self.zero || self.mul(a, b) != self.zero)
            })
    }

    /// Additive closure of a set closed under multiplication by ring elements.
    fn additive_closure(&self, seeds: impl IntoIterator<Item = usize>) -> BitSet {
        let mut set = BitSet::new(self.n);
        set.insert(self.zero);
        let mut queue: VecDeque<usize> = VecDeque::new();
        let mut members = vec![self.zero];
        for s in seeds {
            if set.insert(s) {
                queue.push_back(s);
                members.push(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            let snapshot = members.clone();
            for y in snapshot {
                let z = self.add(x, y);
                if set.insert(z) {
                    queue.push_back(z);
                    members.push(z);
                }
            }
        }
        set
    }

    /// The ideal generated by `gens`, ignoring the grading.
    pub fn ideal_closure_ungraded(&self, gens: &[usize]) -> BitSet {
        let seeds: Vec<usize> = gens
            .iter()
            .flat_map(|&g| (0..self.n).map(move |r| (r, g)))
            .map(|(r, g)| self.mul(r, g))
            .collect();
        self.additive_closure(seeds)
    }

    /// The smallest graded ideal containing `gens` (generators are split into components).
    pub fn ideal_closure(&self, gens: &[usize]) -> BitSet {
        let homog: Vec<usize> = gens
            .iter()
            .flat_map(|&g| self.comps[g].iter().map(|&(_, c)| c))
            .collect();
        self.ideal_closure_ungraded(&homog)
    }

    /// Returns an element of `set` with a component outside it, if any.
    pub fn graded_violation(&self, set: &BitSet) -> Option<(usize, usize)> {
        set.iter().find_map(|a| {
            self.comps[a]
                .iter()
                .find(|&&(_, c)| !set.contains(c))
                .map(|&(_, c)| (a, c))
        })
    }

    pub fn is_ideal(&self, set: &BitSet) -> bool {
        set.contains(self.zero)
            && set.iter().all(|a| {
                set.iter().all(|b| set.contains(self.add(a, b)))
                    && (0..self.n).all(|r| set.contains(self.mul(r, a)))
            })
    }

    pub fn sum_ideals(&self, a: &BitSet, b: &BitSet) -> BitSet {
        let mut out = BitSet::new(self.n);
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.add(x, y));
            }
        }
        out
    }

    /// All graded ideals: the join-closure of the cyclic ideals of homogeneous
    /// elements, together with the zero ideal, sorted canonically.
    pub fn graded_ideals(&self) -> Vec<BitSet> {
        let mut cyclic: BTreeSet<BitSet> = BTreeSet::new();
        for a in self.homogeneous() {
            cyclic.insert(self.ideal_closure(&[a]));
        }
        let cyclic: Vec<BitSet> = cyclic.into_iter().collect();
        let mut all: BTreeSet<BitSet> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<BitSet> = all.iter().cloned().collect();
        while let Some(i) = frontier.pop() {
            for c in &cyclic {
                if c.is_subset(&i) {
                    continue;
                }
                let j = self.sum_ideals(&i, c);
                if all.insert(j.clone()) {
                    frontier.push(j);
                }
            }
        }
        all.insert(BitSet::from_indices(self.n, [self.zero]));
        let mut v: Vec<BitSet> = all.into_iter().collect();
        v.sort_by_key(|s| (s.count(), s.to_vec()));
        v
    }

    pub fn is_proper(&self, set: &BitSet) -> bool {
        !set.contains(self.one)
    }

    /// A pair of homogeneous elements outside `set` whose product lies in it.
    pub fn prime_violation(&self, set: &BitSet) -> Option<(usize, usize)> {
        let outside: Vec<usize> = self.homogeneous().into_iter().filter(|&a| !set.contains(a)).collect();
        for &a in &outside {
            for &b in &outside {
                if set.contains(self.mul(a, b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_homogeneous_prime(&self, set: &BitSet) -> bool {
        self.is_proper(set) && self.prime_violation(set).is_none()
    }

    pub fn homogeneous_primes(&self) -> Vec<BitSet> {
        self.graded_ideals()
            .into_iter()
            .filter(|i| self.is_homogeneous_prime(i))
            .collect()
    }

    /// Graded maximal ideals: maximal among proper graded ideals.
    pub fn graded_maximals(&self) -> Vec<BitSet> {
        let ideals = self.graded_ideals();
        let proper: Vec<&BitSet> = ideals.iter().filter(|i| self.is_proper(i)).collect();
        proper
            .iter()
            .filter(|i| !proper.iter().any(|j| j != *i && i.is_subset(j)))
            .map(|i| (*i).clone())
            .collect()
    }

    /// Every ungraded prime ideal, by scanning all subsets of the carrier.
    pub fn brute_force_prime_ideals(&self) -> Result<Vec<BitSet>> {
        if self.n > 16 {
            return Err(Error::invalid("brute-force prime scan limited to 16 elements"));
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << self.n) {
            let set = BitSet::from_indices(self.n, (0..self.n).filter(|i| mask >> i & 1 == 1));
            if !self.is_ideal(&set) || set.contains(self.one) {
                continue;
            }
            let prime = (0..self.n).all(|a| {
                (0..self.n).all(|b| !set.contains(self.mul(a, b)) || set.contains(a) || set.contains(b))
            });
            if prime {
                out.push(set);
            }
        }
        Ok(out)
    }

    /// Quotient by a graded ideal. Returns the ring and the canonical surjection.
    pub fn quotient(&self, ideal: &BitSet) -> Result<(FiniteRing, Vec<usize>)> {
        if let Some((a, c)) = self.graded_violation(ideal) {
            return Err(Error::NotGraded {
                element: crate::element::Element::Idx(a),
                component: crate::element::Element::Idx(c),
            });
        }
        if ideal.contains(self.one) {
            return Err(Error::ImproperIdeal);
        }
        let mut proj = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for a in 0..self.n {
            if proj[a] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(a);
            for i in ideal.iter() {
                proj[self.add(a, i)] = id;
            }
        }
        let m = reps.len();
        let mut add = vec![0u32; m * m];
        let mut mul = vec![0u32; m * m];
        for (x, &a) in reps.iter().enumerate() {
            for (y, &b) in reps.iter().enumerate() {
                add[x * m + y] = proj[self.add(a, b)] as u32;
                mul[x * m + y] = proj[self.mul(a, b)] as u32;
            }
        }
        let zero = proj[self.zero];
        let comps: Vec<Vec<(Degree, usize)>> = reps
            .iter()
            .map(|&a| {
                self.comps[a]
                    .iter()
                    .map(|(d, c)| (d.clone(), proj[*c]))
                    .filter(|&(_, c)| c != zero)
                    .collect()
            })
            .collect();
        let ring = FiniteRing::from_tables(m, add, mul, self.grading.clone(), Some(comps), false)?;
        Ok((ring, proj))
    }

    /// Multiplicative closure of `gens` together with 1.
    pub fn multiplicative_closure(&self, gens: &[usize]) -> BitSet {
        let mut set = BitSet::from_indices(self.n, [self.one]);
        let mut queue: VecDeque<usize> = VecDeque::from([self.one]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// K = { r : rs = 0 for some s in the multiplicative closure of `gens` }.
    pub fn localization_kernel(&self, gens: &[usize]) -> BitSet {
        let closure = self.multiplicative_closure(gens);
        BitSet::from_indices(
            self.n,
            (0..self.n).filter(|&r| closure.iter().any(|s| self.mul(r, s) == self.zero)),
        )
    }

    /// Localization at the homogeneous elements `gens`, realized as R/K. When the
    /// closure contains 0 the result is the zero ring.
    pub fn localize(&self, gens: &[usize]) -> Result<(FiniteRing, Vec<usize>)> {
        if let Some(&g) = gens.iter().find(|&&g| self.degree[g].is_none()) {
            return Err(Error::NotHomogeneous(crate::element::Element::Idx(g)));
        }
        let k = self.localization_kernel(gens);
        if k.contains(self.one) {
            return Ok((FiniteRing::zero_ring(self.grading.clone()), vec![0; self.n]));
        }
        self.quotient(&k)
    }

    pub fn zero_ring(grading: GradingGroup) -> FiniteRing {
        FiniteRing::from_tables(1, vec![0], vec![0], grading, Some(vec![vec![]]), false)
            .expect("zero ring tables are valid")
    }

    /// The subring R_e, trivially graded, with its embedding into R.
    pub fn degree_e_subring(&self) -> (FiniteRing, Vec<usize>) {
        let e = self.grading.zero();
        let members: Vec<usize> = (0..self.n).filter(|&a| self.degree[a].as_ref() == Some(&e)).collect();
        let index: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let m = members.len();
        let mut add = vec![0u32; m * m];
        let mut mul = vec![0u32; m * m];
        for (x, &a) in members.iter().enumerate() {
            for (y, &b) in members.iter().enumerate() {
                add[x * m + y] = index[&self.add(a, b)] as u32;
                mul[x * m + y] = index[&self.mul(a, b)] as u32;
            }
        }
        let ring = FiniteRing::from_tables(m, add, mul, GradingGroup::Trivial, None, false)
            .expect("degree-e part is a subring");
        (ring, members)
    }

    /// The same ring with the trivial grading.
    pub fn forget_grading(&self) -> FiniteRing {
        FiniteRing::from_tables(self.n, self.add.clone(), self.mul.clone(), GradingGroup::Trivial, None, false)
            .expect("tables already validated")
    }

    /// Checks that `map` is a bijective, degree-preserving ring isomorphism onto `other`.
    pub fn is_graded_isomorphism(&self, other: &FiniteRing, map: &[usize]) -> bool {
        if self.n != other.n || map.len() != self.n {
            return false;
        }
        let image: BTreeSet<usize> = map.iter().copied().collect();
        if image.len() != self.n {
            return false;
        }
        (0..self.n).all(|a| {
            self.degree[a].as_ref().map(|d| other.degree[map[a]].as_ref() == Some(d)).unwrap_or(other.degree[map[a]].is_none())
                && (0..self.n).all(|b| {
                    map[self.add(a, b)] == other.add(map[a], map[b])
                        && map[self.mul(a, b)] == other.mul(map[a], map[b])
                })
        }) && map[self.one] == other.one
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn zmod(n: usize) -> FiniteRing {
        let add = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        let mul = (0..n * n).map(|i| ((i / n) * (i % n) % n) as u32).collect();
        FiniteRing::from_tables(n, add, mul, GradingGroup::Trivial, None, true).unwrap()
    }

    /// F2[Z2] on carrier {0, 1, g, 1+g} = {0, 1, 2, 3}.
    pub(crate) fn f2_z2() -> FiniteRing {
        let elems = [(0u8, 0u8), (1, 0), (0, 1), (1, 1)];
        let idx = |x: (u8, u8)| elems.iter().position(|&e| e == x).unwrap() as u32;
        let mut add = vec![];
        let mut mul = vec![];
        for a in elems {
            for b in elems {
                add.push(idx(((a.0 + b.0) % 2, (a.1 + b.1) % 2)));
                mul.push(idx(((a.0 * b.0 + a.1 * b.1) % 2, (a.0 * b.1 + a.1 * b.0) % 2)));
            }
        }
        let g = GradingGroup::Cyclic(2);
        let comps = vec![
            vec![],
            vec![(Degree(vec![0]), 1)],
            vec![(Degree(vec![1]), 2)],
            vec![(Degree(vec![0]), 1), (Degree(vec![1]), 2)],
        ];
        FiniteRing::from_tables(4, add, mul, g, Some(comps), true).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> BitSet {
        BitSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn z6_graded_ideals() {
        let r = zmod(6);
        let ideals: Vec<Vec<usize>> = r.graded_ideals().iter().map(|s| s.to_vec()).collect();
        assert_eq!(ideals, vec![vec![0], vec![0, 3], vec![0, 2, 4], (0..6).collect()]);
        assert_eq!(r.ideal_closure(&[2]), set(6, &[0, 2, 4]));
    }

    #[test]
    fn f2z2_has_only_trivial_graded_ideals() {
        let r = f2_z2();
        assert_eq!(r.homogeneous(), vec![0, 1, 2]);
        assert_eq!(r.graded_ideals().len(), 2);
        // (1+g) is an ideal but not graded
        let i = r.ideal_closure_ungraded(&[3]);
        assert_eq!(i, set(4, &[0, 3]));
        assert!(r.graded_violation(&i).is_some());
        assert!(r.is_nilpotent(3));
        assert!(r.is_homogeneous_prime(&set(4, &[0])));
    }

    #[test]
    fn z6_primes_and_nilpotents() {
        let r = zmod(6);
        assert!(!r.is_homogeneous_prime(&set(6, &[0])));
        assert!(r.is_homogeneous_prime(&set(6, &[0, 2, 4])));
        assert_eq!(r.homogeneous_primes().len(), 2);
        assert!(!r.is_nilpotent(3));
        assert_eq!(r.graded_maximals().len(), 2);
    }

    #[test]
    fn quotient_and_localization_of_z6() {
        let r = zmod(6);
        let (q, proj) = r.quotient(&set(6, &[0, 3])).unwrap();
        assert_eq!(q.len(), 3);
        assert!(q.is_domain());
        assert_eq!(proj[4], proj[1]);
        let (l, _) = r.localize(&[3]).unwrap();
        assert_eq!(r.localization_kernel(&[3]), set(6, &[0, 2, 4]));
        assert_eq!(l.len(), 2);
        assert!(l.is_domain());
        let (z, _) = r.localize(&[0]).unwrap();
        assert!(z.is_zero_ring());
    }

    #[test]
    fn improper_and_ungraded_quotients_rejected() {
        let r = f2_z2();
        assert_eq!(r.quotient(&BitSet::full(4)).unwrap_err(), Error::ImproperIdeal);
        assert!(matches!(r.quotient(&set(4, &[0, 3])), Err(Error::NotGraded { .. })));
    }

    #[test]
    fn corrupted_table_fails_validation() {
        let mut r = zmod(4);
        r.mul[2 * 4 + 3] = 1;
        r.mul[3 * 4 + 2] = 1;
        let err = FiniteRing::from_tables(4, r.add.clone(), r.mul.clone(), GradingGroup::Trivial, None, true);
        assert!(err.is_err());
    }
}
