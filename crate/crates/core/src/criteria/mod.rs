//! Gelfand and pm+ characterizations as independent criteria, and the harness that
//! cross-checks the equivalences between them.

mod gelfand;
mod pm;

pub use gelfand::*;
pub use pm::*;

use serde::Serialize;

use crate::element::Element;
use crate::error::Result;
use crate::ring::{GradedRing, HeightBound};
use crate::spectrum::{PrimeId, SpectrumPoset};
use crate::verdict::{Point, Verdict, Witness};

/// Outcome of cross-checking a group of verdicts.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Consistency {
    Consistent,
    /// Some criteria were bound-limited; the decided ones agree.
    Inconclusive { unknown: Vec<String> },
    /// Two decided criteria proven equivalent disagree, or an implication fails.
    TheoremViolation { details: Vec<String> },
}

impl Consistency {
    pub fn is_violation(&self) -> bool {
        matches!(self, Consistency::TheoremViolation { .. })
    }
}

/// Named verdicts for one ring plus their consistency.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriteriaReport {
    pub ring: String,
    pub criteria: Vec<(String, Verdict)>,
    pub consistency: Consistency,
}

impl CriteriaReport {
    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.criteria.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

/// Accumulates verdicts, equivalence groups and implications into a report.
pub(crate) struct Harness {
    ring: String,
    criteria: Vec<(String, Verdict)>,
    violations: Vec<String>,
}

impl Harness {
    pub(crate) fn new(ring: &GradedRing) -> Self {
        Harness {
            ring: ring.description().to_string(),
            criteria: vec![],
            violations: vec![],
        }
    }

    pub(crate) fn push(&mut self, name: impl Into<String>, v: Verdict) {
        self.criteria.push((name.into(), v));
    }

    pub(crate) fn violation(&mut self, detail: impl Into<String>) {
        self.violations.push(detail.into());
    }

    fn find(&self, name: &str) -> Option<&Verdict> {
        self.criteria.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    /// Every decided verdict in `names` must agree.
    pub(crate) fn equivalent(&mut self, names: &[&str]) {
        let decided: Vec<(&str, bool)> = names
            .iter()
            .filter_map(|n| match self.find(n) {
                Some(v) if !v.is_unknown() => Some((*n, v.is_true())),
                _ => None,
            })
            .collect();
        if let Some(&(first, val)) = decided.first() {
            for &(n, v) in &decided[1..] {
                if v != val {
                    self.violations.push(format!("{first} is {val} but {n} is {v}"));
                }
            }
        }
    }

    /// `a` True forces `b` not False.
    pub(crate) fn implies(&mut self, a: &str, b: &str) {
        if let (Some(x), Some(y)) = (self.find(a), self.find(b)) {
            if x.is_true() && y.is_false() {
                self.violations.push(format!("{a} holds but {b} fails"));
            }
        }
    }

    pub(crate) fn finish(self) -> CriteriaReport {
        let consistency = if !self.violations.is_empty() {
            Consistency::TheoremViolation {
                details: self.violations,
            }
        } else {
            let unknown: Vec<String> = self
                .criteria
                .iter()
                .filter(|(_, v)| v.is_unknown())
                .map(|(n, _)| n.clone())
                .collect();
            if unknown.is_empty() {
                Consistency::Consistent
            } else {
                Consistency::Inconclusive { unknown }
            }
        };
        CriteriaReport {
            ring: self.ring,
            criteria: self.criteria,
            consistency,
        }
    }
}

// ----- shared search helpers ---------------------------------------------------------

pub(crate) fn points(spec: &SpectrumPoset, ids: impl IntoIterator<Item = PrimeId>) -> Vec<Point> {
    ids.into_iter().map(|i| spec.point(i)).collect()
}

pub(crate) fn outside_all(ring: &GradedRing, spec: &SpectrumPoset, a: &Element, ids: &[PrimeId]) -> bool {
    ids.iter().all(|&i| !ring.contains(&spec.primes[i], a))
}

/// First (x, y) in `xs` × `ys` with xy = 0, using the tables when the ring is finite.
pub(crate) fn find_zero_product(ring: &GradedRing, xs: &[Element], ys: &[Element]) -> Option<(Element, Element)> {
    if let Some(m) = ring.materialize() {
        let zero = m.table.zero();
        let yi: Vec<usize> = ys.iter().map(|y| m.idx(y)).collect();
        for x in xs {
            let xi = m.idx(x);
            if let Some(k) = yi.iter().position(|&y| m.table.mul(xi, y) == zero) {
                return Some((x.clone(), ys[k].clone()));
            }
        }
        return None;
    }
    for x in xs {
        if let Some(y) = ys.iter().find(|y| ring.is_zero(&ring.mul(x, y))) {
            return Some((x.clone(), y.clone()));
        }
    }
    None
}

/// Homogeneous elements within the bound (all of h(R) on finite rings).
pub(crate) fn hom(ring: &GradedRing, bound: HeightBound) -> Vec<Element> {
    ring.homogeneous_elements(bound)
}

/// Re-validates a witness by direct arithmetic and membership. Witnesses made only of
/// spectrum points are checked against the poset.
pub fn recheck(ring: &GradedRing, v: &Verdict, bound: HeightBound) -> Result<bool> {
    let Some(w) = v.witness() else {
        return Ok(true);
    };
    let spec = ring.spectrum()?;
    let ok = match w {
        Witness::AnnPair {
            r,
            r_prime,
            r_avoids,
            r_prime_avoids,
        } => {
            let ids = |ps: &[Point]| ps.iter().map(|p| p.index).collect::<Vec<_>>();
            ring.is_zero(&ring.mul(r, r_prime))
                && ring.is_homogeneous(r).is_some()
                && ring.is_homogeneous(r_prime).is_some()
                && outside_all(ring, &spec, r, &ids(r_avoids))
                && outside_all(ring, &spec, r_prime, &ids(r_prime_avoids))
        }
        Witness::UrysohnFn { r, zero_on, one_on } => {
            zero_on
                .iter()
                .all(|p| matches!(eval_regular(ring, r, p.index, bound), Ok(RegularValue::Zero { .. })))
                && one_on
                    .iter()
                    .all(|p| matches!(eval_regular(ring, r, p.index, bound), Ok(RegularValue::One { .. })))
        }
        Witness::ComaxPair { a, b, c } => {
            let one = ring.one();
            let a2 = ring.sub(&one, a);
            let u = ring.sub(&one, &ring.mul(b, a));
            let w = ring.sub(&one, &ring.mul(c, &a2));
            let e = ring.grading().zero();
            let in_e = |x: &Element| ring.is_homogeneous(x).as_ref() == Some(&e);
            in_e(b) && in_e(c) && ring.is_zero(&ring.mul(&u, &w))
        }
        Witness::SeparatingOpens { x, y, m, m_prime } => {
            !ring.contains(&spec.primes[m.index], x)
                && !ring.contains(&spec.primes[m_prime.index], y)
                && spec
                    .maximal
                    .iter()
                    .all(|&k| ring.contains(&spec.primes[k], x) || ring.contains(&spec.primes[k], y))
        }
        Witness::SameDegreePair {
            q,
            q_prime,
            degree,
            r,
            r_prime,
        } => {
            let (pq, pq2) = (&spec.primes[q.index], &spec.primes[q_prime.index]);
            ring.is_homogeneous(r).as_ref() == Some(degree)
                && ring.is_homogeneous(r_prime).as_ref() == Some(degree)
                && ring.contains(pq, r)
                && !ring.contains(pq2, r)
                && ring.contains(pq2, r_prime)
                && !ring.contains(pq, r_prime)
        }
        Witness::PrimeBelowTwoMax { p, m, m_prime } => {
            m.index != m_prime.index
                && spec.is_maximal(m.index)
                && spec.is_maximal(m_prime.index)
                && spec.poset.le(p.index, m.index)
                && spec.poset.le(p.index, m_prime.index)
        }
        Witness::IncomparablePair { p, q, below } => {
            !spec.poset.le(p.index, q.index)
                && !spec.poset.le(q.index, p.index)
                && spec.poset.le(below.index, p.index)
                && spec.poset.le(below.index, q.index)
        }
        Witness::NormalityViolation { p, q, common } => {
            let po = &spec.poset;
            po.up(p.index).is_disjoint(po.up(q.index))
                && po.down_closure(po.up(p.index)).contains(common.index)
                && po.down_closure(po.up(q.index)).contains(common.index)
        }
        Witness::RetractMap { map } => {
            let f: Vec<usize> = map.iter().map(|(_, t)| t.index).collect();
            crate::topology::is_retraction(&spec.poset, &f)
        }
        _ => true,
    };
    Ok(ok)
}
