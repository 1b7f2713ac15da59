//! Homogeneous spectra: enumeration on finite rings, transfer rules on presented
//! ones, and the prime-avoidance operations.

use serde::Serialize;

use crate::bitset::BitSet;
use crate::construct::{localize, quotient_with_map};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ideal::{GradedIdeal, IdealNf};
use crate::node::Node;
use crate::ring::{GradedRing, HeightBound};
use crate::topology::{poset_height, Poset};
use crate::verdict::{Authority, Point, Verdict, Witness};

/// Index of a homogeneous prime in its ring's canonical spectrum order.
pub type PrimeId = usize;

/// Which computation produced a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Exhaustive scan of the materialized tables.
    Enumerated,
    /// Constructor transfer rules.
    Transfer,
    /// Both ran and agreed.
    Both,
}

/// GSpec(R) under inclusion. `primes` is sorted canonically; `maximal` lists the
/// order-maximal indices, which are exactly GMax(R).
#[derive(Clone, Debug)]
pub struct SpectrumPoset {
    pub primes: Vec<GradedIdeal>,
    pub poset: Poset,
    pub maximal: Vec<PrimeId>,
    pub route: Route,
}

impl SpectrumPoset {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn label(&self, i: PrimeId) -> String {
        self.primes[i].label()
    }

    pub fn point(&self, i: PrimeId) -> Point {
        Point {
            index: i,
            label: self.label(i),
        }
    }

    pub fn is_maximal(&self, i: PrimeId) -> bool {
        self.maximal.contains(&i)
    }

    /// Index of a prime equal to `ideal`, if any.
    pub fn find(&self, ring: &GradedRing, ideal: &GradedIdeal) -> Option<PrimeId> {
        self.primes.iter().position(|p| ring.ideal_eq(p, ideal))
    }

    pub fn record(&self) -> SpectrumRecord {
        SpectrumRecord {
            points: (0..self.len()).map(|i| self.label(i)).collect(),
            covers: self.poset.covers(),
            maximal: self.maximal.clone(),
            height: poset_height(&self.poset),
            route: self.route,
        }
    }

    /// DOT digraph with one edge per covering relation P < Q.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph \"{}\" {{\n  rankdir=BT;\n", escape(name));
        for i in 0..self.len() {
            let shape = if self.is_maximal(i) { "doublecircle" } else { "circle" };
            s.push_str(&format!("  p{i} [label=\"{}\", shape={shape}];\n", escape(&self.label(i))));
        }
        for (a, b) in self.poset.covers() {
            s.push_str(&format!("  p{a} -> p{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Serializable view of a spectrum.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRecord {
    pub points: Vec<String>,
    pub covers: Vec<(usize, usize)>,
    pub maximal: Vec<usize>,
    pub height: usize,
    pub route: Route,
}

pub fn g_spec(ring: &GradedRing) -> Result<SpectrumPoset> {
    ring.spectrum()
}

pub fn g_max(ring: &GradedRing) -> Result<Vec<PrimeId>> {
    Ok(ring.spectrum()?.maximal)
}

/// Uncached spectrum computation behind [`GradedRing::spectrum`].
pub(crate) fn g_spec_uncached(ring: &GradedRing) -> Result<SpectrumPoset> {
    if ring.is_zero_ring() {
        return Ok(SpectrumPoset {
            primes: vec![],
            poset: Poset::antichain(0),
            maximal: vec![],
            route: Route::Enumerated,
        });
    }
    let enumerated = ring.materialize().map(|m| m.table.homogeneous_primes());
    let is_table = matches!(ring.node(), Node::Table(_));
    let transfer = (!is_table).then(|| ring.primes_containing(&ring.zero_ideal_nf()));

    let (nfs, route) = match (enumerated, transfer) {
        (Some(mut e), Some(t)) => {
            let mut via_rule: Vec<BitSet> = t.iter().map(|p| ring.nf_to_explicit(p)).collect();
            e.sort();
            via_rule.sort();
            if e != via_rule {
                return Err(Error::TheoremViolation(format!(
                    "transfer rules give {} primes of {ring} but enumeration finds {}",
                    via_rule.len(),
                    e.len()
                )));
            }
            (t, Route::Both)
        }
        (Some(e), None) => (e.into_iter().map(IdealNf::Explicit).collect(), Route::Enumerated),
        (None, Some(t)) => (t, Route::Transfer),
        (None, None) => unreachable!("table nodes always materialize"),
    };

    let mut primes: Vec<GradedIdeal> = nfs.into_iter().map(|nf| ring.ideal_from_nf(nf)).collect();
    primes.sort_by(|a, b| (&a.gens, &a.nf).cmp(&(&b.gens, &b.nf)));
    let poset = Poset::from_relation(primes.len(), |i, j| ring.ideal_le(&primes[i], &primes[j]))?;
    let maximal = poset.maximal();

    if let Some(m) = ring.materialize() {
        let mut gmax = m.table.graded_maximals();
        let mut marked: Vec<BitSet> = maximal.iter().map(|&i| ring.nf_to_explicit(&primes[i].nf)).collect();
        gmax.sort();
        marked.sort();
        if gmax != marked {
            return Err(Error::TheoremViolation(format!(
                "order-maximal primes of {ring} differ from its graded maximal ideals"
            )));
        }
    }
    Ok(SpectrumPoset {
        primes,
        poset,
        maximal,
        route,
    })
}

/// Every graded ideal of a finite ring, smallest first.
pub fn enumerate_graded_ideals(ring: &GradedRing) -> Result<Vec<GradedIdeal>> {
    let m = ring.materialize().ok_or(Error::NotFinite)?;
    let mut sets = m.table.graded_ideals();
    sets.sort_by(|a, b| (a.count(), a).cmp(&(b.count(), b)));
    Ok(sets
        .into_iter()
        .map(|s| {
            if matches!(ring.node(), Node::Table(_)) {
                ring.ideal_from_nf(IdealNf::Explicit(s))
            } else {
                // label and normal form through the constructor when one exists
                let gens: Vec<Element> = generators_in(ring, &s);
                ring.ideal(&gens)
            }
        })
        .collect())
}

/// Homogeneous generators of an explicit member set, chosen greedily.
fn generators_in(ring: &GradedRing, set: &BitSet) -> Vec<Element> {
    let m = ring.materialize().expect("finite ring");
    let t = &m.table;
    let mut closure = BitSet::from_indices(t.len(), [t.zero()]);
    let mut chosen = vec![];
    for h in t.homogeneous() {
        if set.contains(h) && !closure.contains(h) {
            chosen.push(h);
            closure = t.ideal_closure(&chosen);
        }
    }
    chosen.into_iter().map(|i| m.elements[i].clone()).collect()
}

/// Homogeneous primality: exhaustive on finite rings, by the transfer rules otherwise.
pub fn is_homogeneous_prime(ring: &GradedRing, ideal: &GradedIdeal) -> Result<Verdict> {
    if !ring.is_proper(ideal) {
        return Ok(Verdict::no(
            Authority::Search,
            Witness::Rule {
                reason: "ideal contains 1".into(),
            },
        ));
    }
    if let Some(m) = ring.materialize() {
        let set = ring.nf_to_explicit(&ideal.nf);
        return Ok(match m.table.prime_violation(&set) {
            Some((a, b)) => Verdict::no(
                Authority::Search,
                Witness::HomogeneousPair {
                    a: m.elements[a].clone(),
                    b: m.elements[b].clone(),
                },
            ),
            None => Verdict::yes(Authority::Search, Witness::Exhaustive),
        });
    }
    let spec = ring.spectrum()?;
    Ok(match spec.find(ring, ideal) {
        Some(i) => Verdict::yes(Authority::Poset, Witness::Prime { q: spec.point(i) }),
        None => Verdict::no(
            Authority::Poset,
            Witness::Rule {
                reason: "not among the primes given by the transfer rules".into(),
            },
        ),
    })
}

/// A homogeneous prime Q with I ⊆ Q whose homogeneous elements all lie in the union
/// of `family`.
pub fn find_prime_avoiding(
    ring: &GradedRing,
    ideal: &GradedIdeal,
    family: &[GradedIdeal],
    bound: HeightBound,
) -> Result<PrimeId> {
    if family.iter().any(|f| !ring.is_proper(f)) {
        return Err(Error::ImproperIdeal);
    }
    let hom = ring.homogeneous_elements(bound);
    let in_union = |a: &Element| family.iter().any(|f| ring.contains(f, a));
    let one = ring.one();
    for a in &hom {
        if ring.contains(ideal, a) && !in_union(a) {
            return Err(Error::HypothesisFails {
                a: a.clone(),
                b: one.clone(),
            });
        }
    }
    let outside: Vec<&Element> = hom.iter().filter(|a| !in_union(a)).collect();
    for (i, a) in outside.iter().enumerate() {
        for b in &outside[i..] {
            if ring.contains(ideal, &ring.mul(a, b)) {
                return Err(Error::HypothesisFails {
                    a: (*a).clone(),
                    b: (*b).clone(),
                });
            }
        }
    }

    let spec = ring.spectrum()?;
    let above: Vec<PrimeId> = (0..spec.len()).filter(|&q| ring.ideal_le(ideal, &spec.primes[q])).collect();
    // Q below a single member certifies the avoidance on every homogeneous element.
    if let Some(&q) = above
        .iter()
        .find(|&&q| family.iter().any(|f| ring.ideal_le(&spec.primes[q], f)))
    {
        return Ok(q);
    }
    if ring.is_finite() {
        if let Some(&q) = above
            .iter()
            .find(|&&q| hom.iter().all(|a| !ring.contains(&spec.primes[q], a) || in_union(a)))
        {
            return Ok(q);
        }
        return Err(Error::TheoremViolation(format!(
            "no homogeneous prime of {ring} over {ideal} avoids the family"
        )));
    }
    Err(Error::NotFoundWithinBound(bound.0))
}

/// The first graded maximal M ⊇ I (canonical order) with Q ⊆ M, given that every
/// homogeneous element of Q lies in some graded maximal over I.
pub fn maximal_over(ring: &GradedRing, q: PrimeId, ideal: &GradedIdeal, bound: HeightBound) -> Result<PrimeId> {
    let spec = ring.spectrum()?;
    if q >= spec.len() {
        return Err(Error::invalid(format!("no prime with index {q}")));
    }
    if !ring.is_proper(ideal) {
        return Err(Error::ImproperIdeal);
    }
    let lambda: Vec<PrimeId> = spec
        .maximal
        .iter()
        .copied()
        .filter(|&m| ring.ideal_le(ideal, &spec.primes[m]))
        .collect();
    let qp = &spec.primes[q];
    for a in ring.homogeneous_elements(bound) {
        if ring.contains(qp, &a) && !lambda.iter().any(|&m| ring.contains(&spec.primes[m], &a)) {
            return Err(Error::PreconditionFails(a));
        }
    }
    if let Some(&m) = lambda.iter().find(|&&m| ring.ideal_le(qp, &spec.primes[m])) {
        return Ok(m);
    }
    if ring.is_finite() {
        return Err(Error::TheoremViolation(format!(
            "{} lies in the maximals over {ideal} elementwise but under none of them in {ring}",
            qp.label()
        )));
    }
    // the precondition was only scanned up to the bound
    Err(Error::NotFoundWithinBound(bound.0))
}

/// Checks that GSpec(R/I) is order-isomorphic to the primes of R containing I via
/// the projection.
pub fn check_quotient_transfer(ring: &GradedRing, ideal: &GradedIdeal) -> Result<()> {
    let (q, proj) = quotient_with_map(ring, ideal)?;
    let spec = ring.spectrum()?;
    let qspec = q.spectrum()?;
    let pts: Vec<PrimeId> = (0..spec.len()).filter(|&i| ring.ideal_le(ideal, &spec.primes[i])).collect();
    let images = pts.iter().map(|&i| {
        let gens: Vec<Element> = spec.primes[i].gens.iter().map(|g| proj(g)).collect();
        q.ideal(&gens)
    });
    match_transfer(&q, &qspec, &spec.poset.restrict(&pts), images, &format!("{ring} / {ideal}"))
}

/// Checks that the spectrum of the homogeneous localization at `s` is order-isomorphic
/// to the primes of R missing every element of `s`.
pub fn check_localization_transfer(ring: &GradedRing, s: &[Element]) -> Result<()> {
    let (l, f) = localize(ring, s)?;
    let spec = ring.spectrum()?;
    let lspec = l.spectrum()?;
    let pts: Vec<PrimeId> = (0..spec.len())
        .filter(|&i| s.iter().all(|x| !ring.contains(&spec.primes[i], x)))
        .collect();
    let images = pts.iter().map(|&i| {
        let gens: Vec<Element> = spec.primes[i].gens.iter().map(|g| f(g)).collect();
        l.ideal(&gens)
    });
    match_transfer(&l, &lspec, &spec.poset.restrict(&pts), images, &format!("{ring} at {s:?}"))
}

fn match_transfer(
    target: &GradedRing,
    tspec: &SpectrumPoset,
    source: &Poset,
    images: impl Iterator<Item = GradedIdeal>,
    what: &str,
) -> Result<()> {
    let mut f = vec![];
    for img in images {
        match tspec.find(target, &img) {
            Some(j) => f.push(j),
            None => {
                return Err(Error::TheoremViolation(format!(
                    "{what}: image {img} is not a homogeneous prime"
                )))
            }
        }
    }
    if f.len() != tspec.len() || !source.is_isomorphism(&tspec.poset, &f) {
        return Err(Error::TheoremViolation(format!(
            "{what}: spectrum is not order-isomorphic to the transferred primes"
        )));
    }
    Ok(())
}
