//! Construction-tree representation of presented rings. Every operation is taken
//! "modulo an ideal in normal form", so quotient nodes reuse the base ring's code.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::Value;

use crate::ambient::Ambient;
use crate::bitset::BitSet;
use crate::degree::Degree;
use crate::element::{AmbVal, Element};
use crate::error::{Error, Result};
use crate::finite::FiniteRing;
use crate::ideal::IdealNf;
use crate::ring::{Flag, GradedRing, HeightBound};

/// Quotients with more cosets than this are never listed element by element.
const REPRESENTATIVE_LIMIT: u64 = 1 << 20;

#[derive(Clone)]
pub(crate) enum Node {
    Table(Arc<FiniteRing>),
    /// ambient / (modulus), modulus canonical and not a unit.
    Residue { ambient: Ambient, modulus: AmbVal },
    /// Localization of the ambient domain at the complement of the union of `primes`.
    /// An empty list is the fraction field.
    Pid { ambient: Ambient, primes: Vec<AmbVal> },
    /// A ⋉ A/J with the module in degree 1 of Z/2.
    TrivialExt { base: GradedRing, relations: IdealNf },
    GroupAlgebra { base: GradedRing, members: Vec<Degree> },
    Truncated { base: GradedRing, n: usize },
    /// Matrices [[a, b], [0, a]]; elements are [a, b, 0, a].
    Matrix { base: GradedRing },
    Product(GradedRing, GradedRing),
    Quotient { base: GradedRing, ideal: IdealNf },
}

pub(crate) fn deg(k: i64) -> Degree {
    Degree(vec![k])
}

pub(crate) fn frac_norm(amb: &Ambient, n: AmbVal, d: AmbVal) -> Element {
    if amb.is_zero(&n) {
        return Element::Frac(amb.zero(), amb.one());
    }
    let g = amb.gcd(&n, &d);
    let (n, d) = (amb.exact_div(&n, &g), amb.exact_div(&d, &g));
    let (dc, u) = amb.canonical(&d);
    Element::Frac(amb.mul(&n, &amb.unit_inverse(&u)), dc)
}

fn frac_parts(x: &Element) -> (&AmbVal, &AmbVal) {
    match x {
        Element::Frac(n, d) => (n, d),
        other => panic!("expected a fraction, found {other:?}"),
    }
}

fn res_val(x: &Element) -> &AmbVal {
    match x {
        Element::Res(v) => v,
        other => panic!("expected a residue, found {other:?}"),
    }
}

pub(crate) fn idx(x: &Element) -> usize {
    match x {
        Element::Idx(i) => *i,
        other => panic!("expected a table index, found {other:?}"),
    }
}

fn cartesian(lists: &[Vec<Element>]) -> Vec<Vec<Element>> {
    lists.iter().fold(vec![vec![]], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

fn mismatch(nf: &IdealNf) -> ! {
    panic!("ideal normal form {nf:?} does not belong to this ring")
}

/// Product of `p_i^{v_i}`.
fn uniformizer(amb: &Ambient, primes: &[AmbVal], v: &[u32]) -> AmbVal {
    primes
        .iter()
        .zip(v)
        .fold(amb.one(), |acc, (p, &k)| amb.mul(&acc, &amb.pow(p, k)))
}

impl GradedRing {
    pub fn zero(&self) -> Element {
        match self.node() {
            Node::Table(t) => Element::Idx(t.zero()),
            Node::Residue { ambient, .. } => Element::Res(ambient.zero()),
            Node::Pid { ambient, .. } => Element::Frac(ambient.zero(), ambient.one()),
            Node::TrivialExt { base, .. } => Element::tuple([base.zero(), base.zero()]),
            Node::Matrix { base } => Element::Tuple(vec![base.zero(); 4]),
            Node::GroupAlgebra { base, members } => Element::Tuple(vec![base.zero(); members.len()]),
            Node::Truncated { base, n } => Element::Tuple(vec![base.zero(); *n]),
            Node::Product(l, r) => Element::tuple([l.zero(), r.zero()]),
            Node::Quotient { base, .. } => base.zero(),
        }
    }

    pub fn one(&self) -> Element {
        match self.node() {
            Node::Table(t) => Element::Idx(t.one()),
            Node::Residue { ambient, modulus } => Element::Res(ambient.rem(&ambient.one(), modulus)),
            Node::Pid { ambient, .. } => Element::Frac(ambient.one(), ambient.one()),
            Node::TrivialExt { base, .. } => Element::tuple([base.one(), base.zero()]),
            Node::Matrix { base } => Element::tuple([base.one(), base.zero(), base.zero(), base.one()]),
            Node::GroupAlgebra { base, members } => {
                let mut v = vec![base.zero(); members.len()];
                v[self.identity_slot()] = base.one();
                Element::Tuple(v)
            }
            Node::Truncated { base, n } => {
                let mut v = vec![base.zero(); *n];
                v[0] = base.one();
                Element::Tuple(v)
            }
            Node::Product(l, r) => Element::tuple([l.one(), r.one()]),
            Node::Quotient { base, ideal } => base.nf_reduce(ideal, &base.one()),
        }
    }

    fn identity_slot(&self) -> usize {
        match self.node() {
            Node::GroupAlgebra { members, .. } => members
                .iter()
                .position(|g| self.grading().is_zero(g))
                .expect("group contains its identity"),
            _ => unreachable!(),
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        match self.node() {
            Node::Table(t) => Element::Idx(t.add(idx(a), idx(b))),
            Node::Residue { ambient, modulus } => {
                Element::Res(ambient.rem(&ambient.add(res_val(a), res_val(b)), modulus))
            }
            Node::Pid { ambient, .. } => {
                let ((n1, d1), (n2, d2)) = (frac_parts(a), frac_parts(b));
                let n = ambient.add(&ambient.mul(n1, d2), &ambient.mul(n2, d1));
                frac_norm(ambient, n, ambient.mul(d1, d2))
            }
            Node::TrivialExt { base, relations } => {
                let (x, y) = (a.parts(), b.parts());
                Element::tuple([
                    base.add(&x[0], &y[0]),
                    base.nf_reduce(relations, &base.add(&x[1], &y[1])),
                ])
            }
            Node::Matrix { base } | Node::GroupAlgebra { base, .. } | Node::Truncated { base, .. } => {
                Element::tuple(a.parts().iter().zip(b.parts()).map(|(x, y)| base.add(x, y)))
            }
            Node::Product(l, r) => {
                let (x, y) = (a.parts(), b.parts());
                Element::tuple([l.add(&x[0], &y[0]), r.add(&x[1], &y[1])])
            }
            Node::Quotient { base, ideal } => base.nf_reduce(ideal, &base.add(a, b)),
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        match self.node() {
            Node::Table(t) => Element::Idx(t.neg(idx(a))),
            Node::Residue { ambient, modulus } => Element::Res(ambient.rem(&ambient.neg(res_val(a)), modulus)),
            Node::Pid { ambient, .. } => {
                let (n, d) = frac_parts(a);
                Element::Frac(ambient.neg(n), d.clone())
            }
            Node::TrivialExt { base, relations } => {
                let x = a.parts();
                Element::tuple([base.neg(&x[0]), base.nf_reduce(relations, &base.neg(&x[1]))])
            }
            Node::Matrix { base } | Node::GroupAlgebra { base, .. } | Node::Truncated { base, .. } => {
                Element::tuple(a.parts().iter().map(|x| base.neg(x)))
            }
            Node::Product(l, r) => {
                let x = a.parts();
                Element::tuple([l.neg(&x[0]), r.neg(&x[1])])
            }
            Node::Quotient { base, ideal } => base.nf_reduce(ideal, &base.neg(a)),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        match self.node() {
            Node::Table(t) => Element::Idx(t.mul(idx(a), idx(b))),
            Node::Residue { ambient, modulus } => {
                Element::Res(ambient.rem(&ambient.mul(res_val(a), res_val(b)), modulus))
            }
            Node::Pid { ambient, .. } => {
                let ((n1, d1), (n2, d2)) = (frac_parts(a), frac_parts(b));
                frac_norm(ambient, ambient.mul(n1, n2), ambient.mul(d1, d2))
            }
            Node::TrivialExt { base, relations } => {
                let (x, y) = (a.parts(), b.parts());
                let m = base.add(&base.mul(&x[0], &y[1]), &base.mul(&x[1], &y[0]));
                Element::tuple([base.mul(&x[0], &y[0]), base.nf_reduce(relations, &m)])
            }
            Node::Matrix { base } => {
                let (x, y) = (a.parts(), b.parts());
                let e = |i: usize, j: usize, k: usize, l: usize| {
                    base.add(&base.mul(&x[i], &y[j]), &base.mul(&x[k], &y[l]))
                };
                Element::tuple([e(0, 0, 1, 2), e(0, 1, 1, 3), e(2, 0, 3, 2), e(2, 1, 3, 3)])
            }
            Node::GroupAlgebra { base, members } => {
                let (x, y) = (a.parts(), b.parts());
                let mut out = vec![base.zero(); members.len()];
                for (i, g) in members.iter().enumerate() {
                    if base.is_zero(&x[i]) {
                        continue;
                    }
                    for (j, h) in members.iter().enumerate() {
                        if base.is_zero(&y[j]) {
                            continue;
                        }
                        let gh = self.grading().add(g, h);
                        let k = members.iter().position(|m| *m == gh).expect("group is closed");
                        out[k] = base.add(&out[k], &base.mul(&x[i], &y[j]));
                    }
                }
                Element::Tuple(out)
            }
            Node::Truncated { base, n } => {
                let (x, y) = (a.parts(), b.parts());
                let mut out = vec![base.zero(); *n];
                for i in 0..*n {
                    if base.is_zero(&x[i]) {
                        continue;
                    }
                    for j in 0..*n - i {
                        out[i + j] = base.add(&out[i + j], &base.mul(&x[i], &y[j]));
                    }
                }
                Element::Tuple(out)
            }
            Node::Product(l, r) => {
                let (x, y) = (a.parts(), b.parts());
                Element::tuple([l.mul(&x[0], &y[0]), r.mul(&x[1], &y[1])])
            }
            Node::Quotient { base, ideal } => base.nf_reduce(ideal, &base.mul(a, b)),
        }
    }

    /// Nonzero homogeneous components keyed by degree.
    pub(crate) fn decompose(&self, a: &Element) -> BTreeMap<Degree, Element> {
        let mut out = BTreeMap::new();
        match self.node() {
            Node::Table(t) => {
                for (d, c) in t.components(idx(a)) {
                    out.insert(d.clone(), Element::Idx(*c));
                }
            }
            Node::Residue { .. } | Node::Pid { .. } => {
                if !self.is_zero(a) {
                    out.insert(self.grading().zero(), a.clone());
                }
            }
            Node::TrivialExt { base, .. } => {
                let x = a.parts();
                if !base.is_zero(&x[0]) {
                    out.insert(deg(0), Element::tuple([x[0].clone(), base.zero()]));
                }
                if !base.is_zero(&x[1]) {
                    out.insert(deg(1), Element::tuple([base.zero(), x[1].clone()]));
                }
            }
            Node::Matrix { base } => {
                let x = a.parts();
                let z = base.zero();
                if !base.is_zero(&x[0]) {
                    out.insert(deg(0), Element::tuple([x[0].clone(), z.clone(), z.clone(), x[0].clone()]));
                }
                if !base.is_zero(&x[1]) {
                    out.insert(deg(1), Element::tuple([z.clone(), x[1].clone(), z.clone(), z]));
                }
            }
            Node::GroupAlgebra { base, members } => {
                for (i, c) in a.parts().iter().enumerate() {
                    if !base.is_zero(c) {
                        let mut v = vec![base.zero(); members.len()];
                        v[i] = c.clone();
                        out.insert(members[i].clone(), Element::Tuple(v));
                    }
                }
            }
            Node::Truncated { base, n } => {
                for (k, c) in a.parts().iter().enumerate() {
                    if !base.is_zero(c) {
                        let mut v = vec![base.zero(); *n];
                        v[k] = c.clone();
                        out.insert(deg(k as i64), Element::Tuple(v));
                    }
                }
            }
            Node::Product(l, r) => {
                let x = a.parts();
                let (dl, dr) = (l.decompose(&x[0]), r.decompose(&x[1]));
                let degrees: BTreeSet<&Degree> = dl.keys().chain(dr.keys()).collect();
                for d in degrees {
                    let lc = dl.get(d).cloned().unwrap_or_else(|| l.zero());
                    let rc = dr.get(d).cloned().unwrap_or_else(|| r.zero());
                    out.insert(d.clone(), Element::tuple([lc, rc]));
                }
            }
            Node::Quotient { base, ideal } => {
                for (d, c) in base.decompose(a) {
                    let c = base.nf_reduce(ideal, &c);
                    if !base.is_zero(&c) {
                        out.insert(d, c);
                    }
                }
            }
        }
        out
    }

    // ----- ideals in normal form ----------------------------------------------------

    pub(crate) fn zero_ideal_nf(&self) -> IdealNf {
        self.ideal_nf(&[])
    }

    pub(crate) fn whole_nf(&self) -> IdealNf {
        self.ideal_nf(&[self.one()])
    }

    /// Normal form of the graded ideal generated by homogeneous `gens`.
    pub(crate) fn ideal_nf(&self, gens: &[Element]) -> IdealNf {
        match self.node() {
            Node::Table(t) => IdealNf::Explicit(t.ideal_closure(&gens.iter().map(idx).collect::<Vec<_>>())),
            Node::Residue { ambient, modulus } => {
                IdealNf::Divisor(gens.iter().fold(modulus.clone(), |g, x| ambient.gcd(&g, res_val(x))))
            }
            Node::Pid { ambient, primes } => {
                let nonzero: Vec<&AmbVal> =
                    gens.iter().map(|x| frac_parts(x).0).filter(|n| !ambient.is_zero(n)).collect();
                if nonzero.is_empty() {
                    return IdealNf::Valuation(None);
                }
                let v = primes
                    .iter()
                    .map(|p| nonzero.iter().map(|n| ambient.valuation(n, p)).min().unwrap())
                    .collect();
                IdealNf::Valuation(Some(v))
            }
            Node::TrivialExt { base, relations } => {
                let (mut scal, mut module) = (vec![], vec![]);
                for g in gens {
                    let x = g.parts();
                    scal.push(x[0].clone());
                    module.push(x[1].clone());
                }
                let i0 = base.ideal(&scal).nf;
                let n = base.nf_join(&base.nf_join(&i0, &base.ideal(&module).nf), relations);
                IdealNf::pair(i0, n)
            }
            Node::Matrix { base } => {
                let (mut scal, mut off) = (vec![], vec![]);
                for g in gens {
                    let x = g.parts();
                    scal.push(x[0].clone());
                    off.push(x[1].clone());
                }
                let i0 = base.ideal(&scal).nf;
                let n = base.nf_join(&i0, &base.ideal(&off).nf);
                IdealNf::pair(i0, n)
            }
            Node::GroupAlgebra { base, .. } => {
                let coeffs: Vec<Element> = gens.iter().flat_map(|g| g.parts().iter().cloned()).collect();
                IdealNf::Coeff(Box::new(base.ideal(&coeffs).nf))
            }
            Node::Truncated { base, n } => {
                let chain = (0..*n)
                    .map(|j| {
                        let cs: Vec<Element> =
                            gens.iter().flat_map(|g| g.parts()[..=j].iter().cloned()).collect();
                        base.ideal(&cs).nf
                    })
                    .collect();
                IdealNf::Graded(chain)
            }
            Node::Product(l, r) => {
                let ls: Vec<Element> = gens.iter().map(|g| g.parts()[0].clone()).collect();
                let rs: Vec<Element> = gens.iter().map(|g| g.parts()[1].clone()).collect();
                IdealNf::pair(l.ideal(&ls).nf, r.ideal(&rs).nf)
            }
            Node::Quotient { base, ideal } => {
                IdealNf::Lift(Box::new(base.nf_join(ideal, &base.ideal(gens).nf)))
            }
        }
    }

    /// Canonical representative of the coset `a + I`.
    pub(crate) fn nf_reduce(&self, nf: &IdealNf, a: &Element) -> Element {
        if let IdealNf::Explicit(set) = nf {
            return self.explicit_reduce(set, a);
        }
        match (self.node(), nf) {
            (Node::Residue { ambient, .. }, IdealNf::Divisor(d)) => Element::Res(ambient.rem(res_val(a), d)),
            (Node::Pid { .. }, IdealNf::Valuation(None)) => a.clone(),
            (Node::Pid { ambient, primes }, IdealNf::Valuation(Some(v))) => {
                let pi = uniformizer(ambient, primes, v);
                if ambient.is_unit(&pi) {
                    return self.zero();
                }
                let (n, d) = frac_parts(a);
                let dinv = ambient.mod_inverse(d, &pi).expect("denominators are units modulo the listed primes");
                Element::Frac(ambient.rem(&ambient.mul(n, &dinv), &pi), ambient.one())
            }
            (Node::TrivialExt { base, .. }, IdealNf::Pair(i0, n)) => {
                let x = a.parts();
                Element::tuple([base.nf_reduce(i0, &x[0]), base.nf_reduce(n, &x[1])])
            }
            (Node::Matrix { base }, IdealNf::Pair(i0, n)) => {
                let x = a.parts();
                let d = base.nf_reduce(i0, &x[0]);
                Element::tuple([d.clone(), base.nf_reduce(n, &x[1]), base.zero(), d])
            }
            (Node::GroupAlgebra { base, .. }, IdealNf::Coeff(i)) => {
                Element::tuple(a.parts().iter().map(|c| base.nf_reduce(i, c)))
            }
            (Node::Truncated { base, .. }, IdealNf::Graded(js)) => {
                Element::tuple(a.parts().iter().zip(js).map(|(c, j)| base.nf_reduce(j, c)))
            }
            (Node::Product(l, r), IdealNf::Pair(i, j)) => {
                let x = a.parts();
                Element::tuple([l.nf_reduce(i, &x[0]), r.nf_reduce(j, &x[1])])
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => base.nf_reduce(inner, a),
            _ => mismatch(nf),
        }
    }

    /// Degreewise minimal coset representative over the materialized carrier.
    fn explicit_reduce(&self, set: &BitSet, a: &Element) -> Element {
        let m = self.materialize().expect("explicit ideals live on finite rings");
        let t = &m.table;
        let mut acc = t.zero();
        for (d, c) in t.components(m.idx(a)) {
            let best = set
                .iter()
                .filter(|&j| j == t.zero() || t.degree_of(j) == Some(d))
                .map(|j| t.add(*c, j))
                .min()
                .expect("zero lies in every ideal");
            acc = t.add(acc, best);
        }
        m.elements[acc].clone()
    }

    pub(crate) fn nf_contains(&self, nf: &IdealNf, a: &Element) -> bool {
        match nf {
            IdealNf::Explicit(set) => {
                let m = self.materialize().expect("explicit ideals live on finite rings");
                set.contains(m.idx(a))
            }
            _ => self.is_zero(&self.nf_reduce(nf, a)),
        }
    }

    pub(crate) fn nf_is_whole(&self, nf: &IdealNf) -> bool {
        self.nf_contains(nf, &self.one())
    }

    pub(crate) fn nf_to_explicit(&self, nf: &IdealNf) -> BitSet {
        if let IdealNf::Explicit(s) = nf {
            return s.clone();
        }
        let m = self.materialize().expect("explicit conversion needs a finite ring");
        BitSet::from_indices(
            m.elements.len(),
            m.elements
                .iter()
                .enumerate()
                .filter(|(_, e)| self.nf_contains(nf, e))
                .map(|(i, _)| i),
        )
    }

    pub(crate) fn nf_join(&self, a: &IdealNf, b: &IdealNf) -> IdealNf {
        if matches!(a, IdealNf::Explicit(_)) || matches!(b, IdealNf::Explicit(_)) {
            let m = self.materialize().expect("explicit ideals live on finite rings");
            return IdealNf::Explicit(m.table.sum_ideals(&self.nf_to_explicit(a), &self.nf_to_explicit(b)));
        }
        match (self.node(), a, b) {
            (Node::Residue { ambient, .. }, IdealNf::Divisor(x), IdealNf::Divisor(y)) => {
                IdealNf::Divisor(ambient.gcd(x, y))
            }
            (Node::Pid { .. }, IdealNf::Valuation(x), IdealNf::Valuation(y)) => match (x, y) {
                (None, _) => b.clone(),
                (_, None) => a.clone(),
                (Some(x), Some(y)) => IdealNf::Valuation(Some(x.iter().zip(y).map(|(p, q)| *p.min(q)).collect())),
            },
            (Node::TrivialExt { base, .. } | Node::Matrix { base }, IdealNf::Pair(a0, a1), IdealNf::Pair(b0, b1)) => {
                IdealNf::pair(base.nf_join(a0, b0), base.nf_join(a1, b1))
            }
            (Node::GroupAlgebra { base, .. }, IdealNf::Coeff(x), IdealNf::Coeff(y)) => {
                IdealNf::Coeff(Box::new(base.nf_join(x, y)))
            }
            (Node::Truncated { base, .. }, IdealNf::Graded(x), IdealNf::Graded(y)) => {
                IdealNf::Graded(x.iter().zip(y).map(|(p, q)| base.nf_join(p, q)).collect())
            }
            (Node::Product(l, r), IdealNf::Pair(a0, a1), IdealNf::Pair(b0, b1)) => {
                IdealNf::pair(l.nf_join(a0, b0), r.nf_join(a1, b1))
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(x), IdealNf::Lift(y)) => {
                IdealNf::Lift(Box::new(base.nf_join(x, y)))
            }
            _ => mismatch(a),
        }
    }

    pub(crate) fn nf_eq(&self, a: &IdealNf, b: &IdealNf) -> bool {
        if matches!(a, IdealNf::Explicit(_)) || matches!(b, IdealNf::Explicit(_)) {
            return self.nf_to_explicit(a) == self.nf_to_explicit(b);
        }
        match (self.node(), a, b) {
            (Node::TrivialExt { base, .. } | Node::Matrix { base }, IdealNf::Pair(a0, a1), IdealNf::Pair(b0, b1)) => {
                base.nf_eq(a0, b0) && base.nf_eq(a1, b1)
            }
            (Node::GroupAlgebra { base, .. }, IdealNf::Coeff(x), IdealNf::Coeff(y)) => base.nf_eq(x, y),
            (Node::Truncated { base, .. }, IdealNf::Graded(x), IdealNf::Graded(y)) => {
                x.iter().zip(y).all(|(p, q)| base.nf_eq(p, q))
            }
            (Node::Product(l, r), IdealNf::Pair(a0, a1), IdealNf::Pair(b0, b1)) => {
                l.nf_eq(a0, b0) && r.nf_eq(a1, b1)
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(x), IdealNf::Lift(y)) => base.nf_eq(x, y),
            _ => a == b,
        }
    }

    pub(crate) fn nf_le(&self, a: &IdealNf, b: &IdealNf) -> bool {
        self.nf_eq(&self.nf_join(a, b), b)
    }

    /// Number of cosets of `nf`; `None` when infinite. Saturates on huge finite quotients.
    pub(crate) fn quotient_size(&self, nf: &IdealNf) -> Option<u64> {
        if let IdealNf::Explicit(set) = nf {
            return Some((set.capacity() / set.count()) as u64);
        }
        let mul = |x: Option<u64>, y: Option<u64>| Some(x?.saturating_mul(y?));
        match (self.node(), nf) {
            (Node::Residue { ambient, .. }, IdealNf::Divisor(d)) => {
                Some(ambient.residue_count(d).unwrap_or(u64::MAX))
            }
            (Node::Pid { .. }, IdealNf::Valuation(None)) => None,
            (Node::Pid { ambient, primes }, IdealNf::Valuation(Some(v))) => {
                Some(primes.iter().zip(v).fold(1u64, |acc, (p, &k)| {
                    let q = ambient.residue_count(p).unwrap_or(u64::MAX);
                    acc.saturating_mul(q.saturating_pow(k))
                }))
            }
            (Node::TrivialExt { base, .. } | Node::Matrix { base }, IdealNf::Pair(i0, n)) => {
                mul(base.quotient_size(i0), base.quotient_size(n))
            }
            (Node::GroupAlgebra { base, members }, IdealNf::Coeff(i)) => {
                Some(base.quotient_size(i)?.saturating_pow(members.len() as u32))
            }
            (Node::Truncated { base, .. }, IdealNf::Graded(js)) => {
                js.iter().fold(Some(1), |acc, j| mul(acc, base.quotient_size(j)))
            }
            (Node::Product(l, r), IdealNf::Pair(i, j)) => mul(l.quotient_size(i), r.quotient_size(j)),
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => base.quotient_size(inner),
            _ => mismatch(nf),
        }
    }

    /// One canonical representative per coset; `None` for infinite or oversized quotients.
    pub(crate) fn representatives(&self, nf: &IdealNf) -> Option<Vec<Element>> {
        if self.quotient_size(nf)? > REPRESENTATIVE_LIMIT {
            return None;
        }
        if let IdealNf::Explicit(_) = nf {
            let m = self.materialize()?;
            let mut out: Vec<Element> = m.elements.iter().map(|e| self.nf_reduce(nf, e)).collect();
            out.sort();
            out.dedup();
            return Some(out);
        }
        let out = match (self.node(), nf) {
            (Node::Residue { ambient, .. }, IdealNf::Divisor(d)) => {
                ambient.residues(d).into_iter().map(Element::Res).collect()
            }
            (Node::Pid { ambient, primes }, IdealNf::Valuation(Some(v))) => {
                let pi = uniformizer(ambient, primes, v);
                if ambient.is_unit(&pi) {
                    vec![self.zero()]
                } else {
                    ambient.residues(&pi).into_iter().map(|c| Element::Frac(c, ambient.one())).collect()
                }
            }
            (Node::TrivialExt { base, .. }, IdealNf::Pair(i0, n)) => {
                cartesian(&[base.representatives(i0)?, base.representatives(n)?])
                    .into_iter()
                    .map(Element::Tuple)
                    .collect()
            }
            (Node::Matrix { base }, IdealNf::Pair(i0, n)) => {
                cartesian(&[base.representatives(i0)?, base.representatives(n)?])
                    .into_iter()
                    .map(|v| Element::tuple([v[0].clone(), v[1].clone(), base.zero(), v[0].clone()]))
                    .collect()
            }
            (Node::GroupAlgebra { base, members }, IdealNf::Coeff(i)) => {
                let reps = base.representatives(i)?;
                cartesian(&vec![reps; members.len()]).into_iter().map(Element::Tuple).collect()
            }
            (Node::Truncated { base, .. }, IdealNf::Graded(js)) => {
                let lists: Option<Vec<Vec<Element>>> = js.iter().map(|j| base.representatives(j)).collect();
                cartesian(&lists?).into_iter().map(Element::Tuple).collect()
            }
            (Node::Product(l, r), IdealNf::Pair(i, j)) => {
                cartesian(&[l.representatives(i)?, r.representatives(j)?])
                    .into_iter()
                    .map(Element::Tuple)
                    .collect()
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => base.representatives(inner)?,
            _ => mismatch(nf),
        };
        Some(out)
    }

    pub(crate) fn all_elements(&self) -> Option<Vec<Element>> {
        if let Node::Table(t) = self.node() {
            return Some((0..t.len()).map(Element::Idx).collect());
        }
        self.representatives(&self.zero_ideal_nf())
    }

    /// Elements of height at most `b` (every element when the ring is finite).
    pub(crate) fn elements_up_to(&self, b: HeightBound) -> Vec<Element> {
        if let Some(all) = self.all_elements() {
            return all;
        }
        let h = b.0 as u64;
        let mut out: Vec<Element> = match self.node() {
            Node::Pid { ambient, primes } => {
                let mut v = vec![];
                for n in ambient.values_up_to(h) {
                    for d in ambient.canonical_up_to(h) {
                        if primes.iter().all(|p| ambient.valuation(&d, p) == 0) {
                            v.push(frac_norm(ambient, n.clone(), d));
                        }
                    }
                }
                v
            }
            Node::TrivialExt { base, relations } => {
                let xs = base.elements(b);
                let mut ms: Vec<Element> = xs.iter().map(|m| base.nf_reduce(relations, m)).collect();
                ms.sort();
                ms.dedup();
                cartesian(&[xs, ms]).into_iter().map(Element::Tuple).collect()
            }
            Node::Matrix { base } => {
                let xs = base.elements(b);
                cartesian(&[xs.clone(), xs])
                    .into_iter()
                    .map(|v| Element::tuple([v[0].clone(), v[1].clone(), base.zero(), v[0].clone()]))
                    .collect()
            }
            Node::Truncated { base, n } => {
                cartesian(&vec![base.elements(b); *n]).into_iter().map(Element::Tuple).collect()
            }
            Node::Product(l, r) => {
                cartesian(&[l.elements(b), r.elements(b)]).into_iter().map(Element::Tuple).collect()
            }
            Node::Quotient { base, ideal } => {
                base.elements(b).iter().map(|x| base.nf_reduce(ideal, x)).collect()
            }
            Node::Table(_) | Node::Residue { .. } | Node::GroupAlgebra { .. } => unreachable!("finite rings"),
        };
        out.sort();
        out.dedup();
        out
    }

    /// Homogeneous elements of height at most `b`.
    pub(crate) fn homogeneous_up_to(&self, b: HeightBound) -> Vec<Element> {
        if let Some(all) = self.all_elements() {
            return all.into_iter().filter(|x| self.is_homogeneous(x).is_some()).collect();
        }
        match self.node() {
            Node::Pid { .. } => self.elements_up_to(b),
            Node::TrivialExt { base, relations } => {
                let mut v = vec![];
                for x in base.elements(b) {
                    v.push(Element::tuple([x.clone(), base.zero()]));
                    v.push(Element::tuple([base.zero(), base.nf_reduce(relations, &x)]));
                }
                v
            }
            Node::Matrix { base } => {
                let z = base.zero();
                let mut v = vec![];
                for x in base.elements(b) {
                    v.push(Element::tuple([x.clone(), z.clone(), z.clone(), x.clone()]));
                    v.push(Element::tuple([z.clone(), x, z.clone(), z.clone()]));
                }
                v
            }
            Node::Truncated { base, n } => {
                let mut v = vec![];
                for x in base.elements(b) {
                    for k in 0..*n {
                        let mut c = vec![base.zero(); *n];
                        c[k] = x.clone();
                        v.push(Element::Tuple(c));
                    }
                }
                v
            }
            Node::Product(l, r) => {
                let group = |ring: &GradedRing| {
                    let mut by: BTreeMap<Degree, Vec<Element>> = BTreeMap::new();
                    for x in ring.homogeneous_elements(b) {
                        if let Some(d) = ring.is_homogeneous(&x) {
                            by.entry(d).or_default().push(x);
                        }
                    }
                    by
                };
                let (gl, gr) = (group(l), group(r));
                let degrees: BTreeSet<&Degree> = gl.keys().chain(gr.keys()).collect();
                let mut v = vec![];
                for d in degrees {
                    let mut ls = gl.get(d).cloned().unwrap_or_default();
                    ls.push(l.zero());
                    let mut rs = gr.get(d).cloned().unwrap_or_default();
                    rs.push(r.zero());
                    v.extend(cartesian(&[ls, rs]).into_iter().map(Element::Tuple));
                }
                v
            }
            Node::Quotient { base, ideal } => base
                .homogeneous_elements(b)
                .iter()
                .map(|x| base.nf_reduce(ideal, x))
                .collect(),
            Node::Table(_) | Node::Residue { .. } | Node::GroupAlgebra { .. } => unreachable!("finite rings"),
        }
    }

    /// Degrees carrying a nonzero component of R/I.
    pub(crate) fn support_mod(&self, nf: &IdealNf) -> BTreeSet<Degree> {
        let e = self.grading().zero();
        let mut out = BTreeSet::new();
        if let IdealNf::Explicit(set) = nf {
            if self.nf_is_whole(nf) {
                return out;
            }
            let m = self.materialize().expect("explicit ideals live on finite rings");
            let (q, _) = m.table.quotient(set).expect("explicit ideals are graded and proper");
            return q.support();
        }
        match (self.node(), nf) {
            (Node::Residue { .. } | Node::Pid { .. }, _) => {
                if !self.nf_is_whole(nf) {
                    out.insert(e);
                }
            }
            (Node::TrivialExt { base, .. } | Node::Matrix { base }, IdealNf::Pair(i0, n)) => {
                if !base.nf_is_whole(i0) {
                    out.insert(deg(0));
                }
                if !base.nf_is_whole(n) {
                    out.insert(deg(1));
                }
            }
            (Node::GroupAlgebra { base, members }, IdealNf::Coeff(i)) => {
                if !base.nf_is_whole(i) {
                    out.extend(members.iter().cloned());
                }
            }
            (Node::Truncated { base, .. }, IdealNf::Graded(js)) => {
                for (k, j) in js.iter().enumerate() {
                    if !base.nf_is_whole(j) {
                        out.insert(deg(k as i64));
                    }
                }
            }
            (Node::Product(l, r), IdealNf::Pair(i, j)) => {
                out.extend(l.support_mod(i));
                out.extend(r.support_mod(j));
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => out.extend(base.support_mod(inner)),
            _ => mismatch(nf),
        }
        out
    }

    /// R/I via the finite table layer.
    fn explicit_quotient(&self, nf: &IdealNf) -> Option<(FiniteRing, Vec<usize>)> {
        let m = self.materialize()?;
        if self.nf_is_whole(nf) {
            return Some((FiniteRing::zero_ring(self.grading().clone()), vec![0; m.elements.len()]));
        }
        Some(m.table.quotient(&self.nf_to_explicit(nf)).expect("normal forms are graded"))
    }

    pub(crate) fn quotient_is_domain(&self, nf: &IdealNf) -> Flag {
        if self.nf_is_whole(nf) {
            return Flag::False;
        }
        match (self.node(), nf) {
            (_, IdealNf::Explicit(_)) | (Node::Table(_), _) => self.table_flag(nf, |q| q.is_domain()),
            (Node::Residue { ambient, .. }, IdealNf::Divisor(d)) => ambient.is_prime(d).into(),
            (Node::Pid { .. }, IdealNf::Valuation(None)) => Flag::True,
            (Node::Pid { .. }, IdealNf::Valuation(Some(v))) => {
                (v.iter().sum::<u32>() == 1).into()
            }
            (Node::TrivialExt { base, .. } | Node::Matrix { base }, IdealNf::Pair(i0, n)) => {
                if base.nf_is_whole(n) {
                    base.quotient_is_domain(i0)
                } else {
                    Flag::False
                }
            }
            // g - 1 is a zero divisor for every g != e of finite order.
            (Node::GroupAlgebra { base, members }, IdealNf::Coeff(i)) => {
                if members.len() > 1 {
                    Flag::False
                } else {
                    base.quotient_is_domain(i)
                }
            }
            (Node::Truncated { base, .. }, IdealNf::Graded(js)) => {
                if js[1..].iter().all(|j| base.nf_is_whole(j)) {
                    base.quotient_is_domain(&js[0])
                } else {
                    Flag::False
                }
            }
            (Node::Product(l, r), IdealNf::Pair(i, j)) => {
                if l.nf_is_whole(i) {
                    r.quotient_is_domain(j)
                } else if r.nf_is_whole(j) {
                    l.quotient_is_domain(i)
                } else {
                    Flag::False
                }
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => base.quotient_is_domain(inner),
            _ => mismatch(nf),
        }
    }

    /// Locality of R/I as an ungraded ring.
    pub(crate) fn quotient_is_local(&self, nf: &IdealNf) -> Flag {
        if self.nf_is_whole(nf) {
            return Flag::False;
        }
        match (self.node(), nf) {
            (_, IdealNf::Explicit(_)) | (Node::Table(_), _) | (Node::GroupAlgebra { .. }, _) => {
                self.table_flag(nf, |q| q.forget_grading().graded_maximals().len() == 1)
            }
            (Node::Residue { ambient, .. }, IdealNf::Divisor(d)) => (ambient.prime_factors(d).len() == 1).into(),
            (Node::Pid { primes, .. }, IdealNf::Valuation(None)) => (primes.len() <= 1).into(),
            (Node::Pid { .. }, IdealNf::Valuation(Some(v))) => (v.iter().filter(|&&k| k > 0).count() == 1).into(),
            (Node::TrivialExt { base, .. } | Node::Matrix { base }, IdealNf::Pair(i0, _)) => {
                base.quotient_is_local(i0)
            }
            (Node::Truncated { base, .. }, IdealNf::Graded(js)) => base.quotient_is_local(&js[0]),
            (Node::Product(l, r), IdealNf::Pair(i, j)) => {
                if l.nf_is_whole(i) {
                    r.quotient_is_local(j)
                } else if r.nf_is_whole(j) {
                    l.quotient_is_local(i)
                } else {
                    Flag::False
                }
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => base.quotient_is_local(inner),
            _ => mismatch(nf),
        }
    }

    fn table_flag(&self, nf: &IdealNf, f: impl Fn(&FiniteRing) -> bool) -> Flag {
        match self.explicit_quotient(nf) {
            Some((q, _)) => f(&q).into(),
            None => Flag::Unknown,
        }
    }

    /// k such that every nilpotent x of R/I has x^k in I.
    pub(crate) fn nil_bound(&self, nf: &IdealNf) -> u32 {
        let size_bound = |s: Option<u64>| s.map(|s| s.min(u32::MAX as u64) as u32).unwrap_or(u32::MAX).max(1);
        match (self.node(), nf) {
            (_, IdealNf::Explicit(_)) | (Node::Table(_), _) | (Node::GroupAlgebra { .. }, _) => {
                size_bound(self.quotient_size(nf))
            }
            (Node::Residue { ambient, .. }, IdealNf::Divisor(d)) => ambient
                .prime_factors(d)
                .iter()
                .map(|p| ambient.valuation(d, p))
                .max()
                .unwrap_or(1)
                .max(1),
            (Node::Pid { .. }, IdealNf::Valuation(None)) => 1,
            (Node::Pid { .. }, IdealNf::Valuation(Some(v))) => v.iter().copied().max().unwrap_or(1).max(1),
            (Node::TrivialExt { base, .. } | Node::Matrix { base }, IdealNf::Pair(i0, _)) => {
                base.nil_bound(i0).saturating_add(1)
            }
            (Node::Truncated { base, n }, IdealNf::Graded(js)) => {
                base.nil_bound(&js[0]).saturating_add(*n as u32 - 1)
            }
            (Node::Product(l, r), IdealNf::Pair(i, j)) => l.nil_bound(i).max(r.nil_bound(j)),
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => base.nil_bound(inner),
            _ => mismatch(nf),
        }
    }

    /// A representative of the inverse of `a` in R/I.
    pub(crate) fn quotient_inverse(&self, nf: &IdealNf, a: &Element) -> Option<Element> {
        if self.nf_is_whole(nf) {
            return Some(self.zero());
        }
        match (self.node(), nf) {
            (_, IdealNf::Explicit(_)) | (Node::Table(_), _) | (Node::GroupAlgebra { .. }, _) => {
                let m = self.materialize()?;
                let one = self.one();
                m.elements
                    .iter()
                    .find(|y| self.nf_contains(nf, &self.sub(&self.mul(a, y), &one)))
                    .map(|y| self.nf_reduce(nf, y))
            }
            (Node::Residue { ambient, .. }, IdealNf::Divisor(d)) => {
                ambient.mod_inverse(res_val(a), d).map(Element::Res)
            }
            (Node::Pid { ambient, primes }, IdealNf::Valuation(None)) => {
                let (n, d) = frac_parts(a);
                let unit = !ambient.is_zero(n) && primes.iter().all(|p| ambient.valuation(n, p) == 0);
                unit.then(|| frac_norm(ambient, d.clone(), n.clone()))
            }
            (Node::Pid { ambient, primes }, IdealNf::Valuation(Some(v))) => {
                let pi = uniformizer(ambient, primes, v);
                let c = self.nf_reduce(nf, a);
                let inv = ambient.mod_inverse(frac_parts(&c).0, &pi)?;
                Some(Element::Frac(inv, ambient.one()))
            }
            (Node::TrivialExt { base, .. }, IdealNf::Pair(i0, n)) => {
                let x = a.parts();
                let u = base.quotient_inverse(i0, &x[0])?;
                let m = base.neg(&base.mul(&base.mul(&u, &u), &x[1]));
                Some(Element::tuple([base.nf_reduce(i0, &u), base.nf_reduce(n, &m)]))
            }
            (Node::Matrix { base }, IdealNf::Pair(i0, n)) => {
                let x = a.parts();
                let u = base.quotient_inverse(i0, &x[0])?;
                let b = base.neg(&base.mul(&base.mul(&u, &u), &x[1]));
                let u = base.nf_reduce(i0, &u);
                Some(Element::tuple([u.clone(), base.nf_reduce(n, &b), base.zero(), u]))
            }
            (Node::Truncated { base, n }, IdealNf::Graded(js)) => {
                let f = a.parts();
                let u = base.quotient_inverse(&js[0], &f[0])?;
                let mut g = vec![u.clone()];
                for k in 1..*n {
                    let s = (1..=k).fold(base.zero(), |acc, i| base.add(&acc, &base.mul(&f[i], &g[k - i])));
                    g.push(base.nf_reduce(&js[k], &base.neg(&base.mul(&u, &s))));
                }
                g[0] = base.nf_reduce(&js[0], &g[0]);
                Some(Element::Tuple(g))
            }
            (Node::Product(l, r), IdealNf::Pair(i, j)) => {
                let x = a.parts();
                Some(Element::tuple([l.quotient_inverse(i, &x[0])?, r.quotient_inverse(j, &x[1])?]))
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => base.quotient_inverse(inner, a),
            _ => mismatch(nf),
        }
    }

    /// Homogeneous primes of R containing I, by transfer through the construction.
    pub(crate) fn primes_containing(&self, nf: &IdealNf) -> Vec<IdealNf> {
        if self.nf_is_whole(nf) {
            return vec![];
        }
        match (self.node(), nf) {
            (_, IdealNf::Explicit(_)) | (Node::Table(_), _) => {
                let m = self.materialize().expect("explicit ideals live on finite rings");
                let set = self.nf_to_explicit(nf);
                m.table
                    .homogeneous_primes()
                    .into_iter()
                    .filter(|p| set.is_subset(p))
                    .map(IdealNf::Explicit)
                    .collect()
            }
            (Node::Residue { ambient, .. }, IdealNf::Divisor(d)) => {
                ambient.prime_factors(d).into_iter().map(IdealNf::Divisor).collect()
            }
            (Node::Pid { primes, .. }, IdealNf::Valuation(v)) => {
                let unit = |i: usize| IdealNf::Valuation(Some((0..primes.len()).map(|j| (i == j) as u32).collect()));
                match v {
                    None => std::iter::once(IdealNf::Valuation(None))
                        .chain((0..primes.len()).map(unit))
                        .collect(),
                    Some(v) => (0..primes.len()).filter(|&i| v[i] > 0).map(unit).collect(),
                }
            }
            (Node::TrivialExt { base, .. } | Node::Matrix { base }, IdealNf::Pair(i0, _)) => base
                .primes_containing(i0)
                .into_iter()
                .map(|p| IdealNf::pair(p, base.whole_nf()))
                .collect(),
            (Node::GroupAlgebra { base, .. }, IdealNf::Coeff(i)) => base
                .primes_containing(i)
                .into_iter()
                .map(|p| IdealNf::Coeff(Box::new(p)))
                .collect(),
            (Node::Truncated { base, n }, IdealNf::Graded(js)) => base
                .primes_containing(&js[0])
                .into_iter()
                .map(|p| {
                    let mut chain = vec![p];
                    chain.extend(std::iter::repeat(base.whole_nf()).take(n - 1));
                    IdealNf::Graded(chain)
                })
                .collect(),
            (Node::Product(l, r), IdealNf::Pair(i, j)) => {
                let mut out: Vec<IdealNf> = l
                    .primes_containing(i)
                    .into_iter()
                    .map(|p| IdealNf::pair(p, r.whole_nf()))
                    .collect();
                out.extend(r.primes_containing(j).into_iter().map(|q| IdealNf::pair(l.whole_nf(), q)));
                out
            }
            (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => base
                .primes_containing(inner)
                .into_iter()
                .map(|p| IdealNf::Lift(Box::new(p)))
                .collect(),
            _ => mismatch(nf),
        }
    }

    /// A short list of homogeneous generators for display.
    pub(crate) fn generators_of(&self, nf: &IdealNf) -> Vec<Element> {
        let mut out = vec![];
        match (self.node(), nf) {
            (_, IdealNf::Explicit(set)) => {
                let m = self.materialize().expect("explicit ideals live on finite rings");
                let t = &m.table;
                let mut closure = BitSet::from_indices(t.len(), [t.zero()]);
                let mut chosen = vec![];
                for h in t.homogeneous() {
                    if set.contains(h) && !closure.contains(h) {
                        chosen.push(h);
                        closure = t.ideal_closure(&chosen);
                    }
                }
                out = chosen.into_iter().map(|i| m.elements[i].clone()).collect();
            }
            (Node::Residue { modulus, .. }, IdealNf::Divisor(d)) => {
                if d != modulus {
                    out.push(Element::Res(d.clone()));
                }
            }
            (Node::Pid { .. }, IdealNf::Valuation(None)) => {}
            (Node::Pid { ambient, primes }, IdealNf::Valuation(Some(v))) => {
                out.push(Element::Frac(uniformizer(ambient, primes, v), ambient.one()));
            }
            (Node::TrivialExt { base, relations }, IdealNf::Pair(i0, n)) => {
                for g in base.generators_of(i0) {
                    out.push(Element::tuple([g, base.zero()]));
                }
                let mut so_far = base.nf_join(i0, relations);
                for h in base.generators_of(n) {
                    if !base.nf_contains(&so_far, &h) {
                        so_far = base.nf_join(&so_far, &base.ideal(&[h.clone()]).nf);
                        out.push(Element::tuple([base.zero(), h]));
                    }
                }
            }
            (Node::Matrix { base }, IdealNf::Pair(i0, n)) => {
                let z = base.zero();
                for g in base.generators_of(i0) {
                    out.push(Element::tuple([g.clone(), z.clone(), z.clone(), g]));
                }
                let mut so_far = i0.as_ref().clone();
                for h in base.generators_of(n) {
                    if !base.nf_contains(&so_far, &h) {
                        so_far = base.nf_join(&so_far, &base.ideal(&[h.clone()]).nf);
                        out.push(Element::tuple([z.clone(), h, z.clone(), z.clone()]));
                    }
                }
            }
            (Node::GroupAlgebra { base, members }, IdealNf::Coeff(i)) => {
                let slot = self.identity_slot();
                for g in base.generators_of(i) {
                    let mut v = vec![base.zero(); members.len()];
                    v[slot] = g;
                    out.push(Element::Tuple(v));
                }
            }
            (Node::Truncated { base, n }, IdealNf::Graded(js)) => {
                let mut prev = base.zero_ideal_nf();
                for (k, j) in js.iter().enumerate() {
                    for h in base.generators_of(j) {
                        if !base.nf_contains(&prev, &h) {
                            prev = base.nf_join(&prev, &base.ideal(&[h.clone()]).nf);
                            let mut v = vec![base.zero(); *n];
                            v[k] = h;
                            out.push(Element::Tuple(v));
                        }
                    }
                }
            }
            (Node::Product(l, r), IdealNf::Pair(i, j)) => {
                for g in l.generators_of(i) {
                    out.push(Element::tuple([g, r.zero()]));
                }
                for h in r.generators_of(j) {
                    out.push(Element::tuple([l.zero(), h]));
                }
            }
            (Node::Quotient { base, ideal }, IdealNf::Lift(inner)) => {
                for g in base.generators_of(inner) {
                    let g = base.nf_reduce(ideal, &g);
                    if !base.is_zero(&g) && !out.contains(&g) {
                        out.push(g);
                    }
                }
            }
            _ => mismatch(nf),
        }
        out
    }

    // ----- element parsing ------------------------------------------------------------

    /// Parses a JSON element in the context of this ring.
    pub fn parse_element(&self, v: &Value) -> Result<Element> {
        let bad = |msg: &str| Error::parse(v.to_string(), format!("{msg} in {self}"));
        let arr = |len: Option<usize>| -> Result<&Vec<Value>> {
            let a = v.as_array().ok_or_else(|| bad("expected an array"))?;
            match len {
                Some(n) if a.len() != n => Err(bad(&format!("expected {n} entries"))),
                _ => Ok(a),
            }
        };
        match self.node() {
            Node::Table(t) => {
                let i = v.as_u64().ok_or_else(|| bad("expected a carrier index"))? as usize;
                if i >= t.len() {
                    return Err(bad("carrier index out of range"));
                }
                Ok(Element::Idx(i))
            }
            Node::Residue { ambient, modulus } => Ok(Element::Res(ambient.rem(&parse_amb(ambient, v)?, modulus))),
            Node::Pid { ambient, primes } => {
                let (n, d) = match v {
                    Value::String(s) => {
                        let (a, b) = s.split_once('/').ok_or_else(|| bad("expected a/b"))?;
                        let p = |x: &str| x.trim().parse::<i64>().map_err(|_| bad("bad integer"));
                        (parse_amb(ambient, &Value::from(p(a)?))?, parse_amb(ambient, &Value::from(p(b)?))?)
                    }
                    Value::Object(o) => {
                        let n = o.get("num").ok_or_else(|| bad("missing num"))?;
                        let d = o.get("den").ok_or_else(|| bad("missing den"))?;
                        (parse_amb(ambient, n)?, parse_amb(ambient, d)?)
                    }
                    _ => (parse_amb(ambient, v)?, ambient.one()),
                };
                if ambient.is_zero(&d) {
                    return Err(bad("zero denominator"));
                }
                if primes.iter().any(|p| ambient.valuation(&d, p) > 0) {
                    return Err(bad("denominator is not invertible"));
                }
                Ok(frac_norm(ambient, n, d))
            }
            Node::TrivialExt { base, relations } => {
                let a = arr(Some(2))?;
                Ok(Element::tuple([
                    base.parse_element(&a[0])?,
                    base.nf_reduce(relations, &base.parse_element(&a[1])?),
                ]))
            }
            Node::Matrix { base } => {
                let a = arr(None)?;
                let (d, b) = match a.len() {
                    2 => (base.parse_element(&a[0])?, base.parse_element(&a[1])?),
                    4 => {
                        let x: Vec<Element> = a.iter().map(|e| base.parse_element(e)).collect::<Result<_>>()?;
                        if !base.is_zero(&x[2]) || x[0] != x[3] {
                            return Err(bad("not of the form [[a, b], [0, a]]"));
                        }
                        (x[0].clone(), x[1].clone())
                    }
                    _ => return Err(bad("expected [a, b] or [a, b, 0, a]")),
                };
                Ok(Element::tuple([d.clone(), b, base.zero(), d]))
            }
            Node::GroupAlgebra { base, members } => {
                let a = arr(Some(members.len()))?;
                Ok(Element::Tuple(a.iter().map(|e| base.parse_element(e)).collect::<Result<_>>()?))
            }
            Node::Truncated { base, n } => {
                let a = arr(None)?;
                if a.len() > *n {
                    return Err(bad("too many coefficients"));
                }
                let mut cs: Vec<Element> = a.iter().map(|e| base.parse_element(e)).collect::<Result<_>>()?;
                cs.resize(*n, base.zero());
                Ok(Element::Tuple(cs))
            }
            Node::Product(l, r) => {
                let a = arr(Some(2))?;
                Ok(Element::tuple([l.parse_element(&a[0])?, r.parse_element(&a[1])?]))
            }
            Node::Quotient { base, ideal } => Ok(base.nf_reduce(ideal, &base.parse_element(v)?)),
        }
    }
}

/// Parses an ambient value: an integer, or a coefficient list (low to high) for F_p[t].
pub(crate) fn parse_amb(ambient: &Ambient, v: &Value) -> Result<AmbVal> {
    let bad = |msg: &str| Error::parse(v.to_string(), msg.to_string());
    let val = match (ambient, v) {
        (Ambient::Integers, Value::Number(_)) => {
            let n = v.as_i64().ok_or_else(|| bad("integer out of range"))?;
            AmbVal::Int(n)
        }
        (Ambient::Poly(p), Value::Number(_)) => {
            let n = v.as_i64().ok_or_else(|| bad("integer out of range"))?;
            ambient.from_int(n.rem_euclid(*p as i64))
        }
        (Ambient::Poly(p), Value::Array(cs)) => {
            let mut out = vec![];
            for c in cs {
                let c = c.as_i64().ok_or_else(|| bad("coefficients must be integers"))?;
                out.push(c.rem_euclid(*p as i64) as u32);
            }
            while out.last() == Some(&0) {
                out.pop();
            }
            AmbVal::Poly(out)
        }
        _ => return Err(bad("expected an ambient value")),
    };
    if !ambient.check_declared(&val) {
        return Err(Error::OverflowRisk(format!("declared value {val} exceeds the supported range")));
    }
    Ok(val)
}
