//! The graded-ring abstraction shared by the finite table layer and the presented
//! (construction-tree) layer.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::degree::{Degree, GradingGroup};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::finite::FiniteRing;
use crate::ideal::{GradedIdeal, IdealNf};
use crate::node::Node;
use crate::spectrum::SpectrumPoset;

/// Rings with at most this many elements are materialized into tables.
pub const MATERIALIZE_LIMIT: u64 = 1024;

/// Number of sampled triples for ring-axiom checks on infinite rings.
pub const AXIOM_SAMPLES: usize = 512;

/// Controls presented-layer enumeration: numerators and denominators of height at most
/// `bound`. Finite rings ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HeightBound(pub u32);

impl Default for HeightBound {
    fn default() -> Self {
        HeightBound(8)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    True,
    False,
    Unknown,
}

impl From<bool> for Flag {
    fn from(b: bool) -> Self {
        if b {
            Flag::True
        } else {
            Flag::False
        }
    }
}

/// A finite ring as explicit tables plus the element payloads behind each index.
#[derive(Debug)]
pub struct Materialized {
    pub table: FiniteRing,
    pub elements: Vec<Element>,
    pub index: HashMap<Element, usize>,
}

impl Materialized {
    pub fn idx(&self, a: &Element) -> usize {
        *self
            .index
            .get(a)
            .unwrap_or_else(|| panic!("element {a:?} not in the materialized carrier"))
    }
}

pub(crate) struct RingInner {
    pub(crate) node: Node,
    pub(crate) grading: GradingGroup,
    pub(crate) description: String,
    materialized: OnceLock<Option<Arc<Materialized>>>,
    pub(crate) spectrum: OnceLock<Result<SpectrumPoset>>,
}

/// A graded commutative ring. Cheap to clone; immutable and shareable across threads.
#[derive(Clone)]
pub struct GradedRing(pub(crate) Arc<RingInner>);

impl fmt::Debug for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedRing({})", self.0.description)
    }
}

impl fmt::Display for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.description)
    }
}

impl GradedRing {
    pub(crate) fn from_node(node: Node, grading: GradingGroup, description: impl Into<String>) -> Self {
        GradedRing(Arc::new(RingInner {
            node,
            grading,
            description: description.into(),
            materialized: OnceLock::new(),
            spectrum: OnceLock::new(),
        }))
    }

    /// Same ring under a new description.
    pub(crate) fn from_node_like(other: &GradedRing, description: impl Into<String>) -> Self {
        GradedRing::from_node(other.node().clone(), other.grading().clone(), description)
    }

    /// True when the ring was given by explicit tables rather than a construction.
    pub fn is_table(&self) -> bool {
        matches!(self.node(), Node::Table(_))
    }

    pub(crate) fn node(&self) -> &Node {
        &self.0.node
    }

    pub fn description(&self) -> &str {
        &self.0.description
    }

    pub fn grading(&self) -> &GradingGroup {
        &self.0.grading
    }

    pub fn is_trivially_graded(&self) -> bool {
        self.0.grading.is_trivial()
    }

    pub fn cardinality(&self) -> Option<u64> {
        self.quotient_size(&self.zero_ideal_nf())
    }

    pub fn is_finite(&self) -> bool {
        self.cardinality().is_some()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.cardinality() == Some(1)
    }

    /// Tables for finite rings within [`MATERIALIZE_LIMIT`]; cached.
    pub fn materialize(&self) -> Option<Arc<Materialized>> {
        self.0
            .materialized
            .get_or_init(|| self.build_materialized().map(Arc::new))
            .clone()
    }

    fn build_materialized(&self) -> Option<Materialized> {
        if let Node::Table(t) = self.node() {
            let elements: Vec<Element> = (0..t.len()).map(Element::Idx).collect();
            let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            return Some(Materialized {
                table: (**t).clone(),
                elements,
                index,
            });
        }
        let n = self.cardinality()?;
        if n > MATERIALIZE_LIMIT {
            return None;
        }
        let mut elements = self.all_elements()?;
        elements.sort();
        elements.dedup();
        assert_eq!(elements.len() as u64, n, "enumeration disagrees with cardinality in {self}");
        let index: HashMap<Element, usize> =
            elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate().skip(i) {
                let s = index[&self.add(a, b)] as u32;
                let p = index[&self.mul(a, b)] as u32;
                add[i * n + j] = s;
                add[j * n + i] = s;
                mul[i * n + j] = p;
                mul[j * n + i] = p;
            }
        }
        let comps: Vec<Vec<(Degree, usize)>> = elements
            .iter()
            .map(|a| {
                self.decompose(a)
                    .into_iter()
                    .map(|(d, c)| (d, index[&c]))
                    .collect()
            })
            .collect();
        let table = FiniteRing::from_tables(n, add, mul, self.grading().clone(), Some(comps), false)
            .expect("materialized tables are well formed");
        Some(Materialized { table, elements, index })
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.add(a, &self.neg(b))
    }

    pub fn pow(&self, a: &Element, e: u32) -> Element {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        *a == self.zero()
    }

    /// Degree of a homogeneous element (zero reports the identity degree).
    pub fn is_homogeneous(&self, a: &Element) -> Option<Degree> {
        let comps = self.decompose(a);
        match comps.len() {
            0 => Some(self.grading().zero()),
            1 => comps.into_keys().next(),
            _ => None,
        }
    }

    pub fn degree_of(&self, a: &Element) -> Option<Degree> {
        self.is_homogeneous(a)
    }

    /// Homogeneous elements: all of h(R) for finite rings, those of height at most
    /// `bound` otherwise.
    pub fn homogeneous_elements(&self, bound: HeightBound) -> Vec<Element> {
        if let Some(m) = self.materialize() {
            return m
                .table
                .homogeneous()
                .into_iter()
                .map(|i| m.elements[i].clone())
                .collect();
        }
        let mut v = self.homogeneous_up_to(bound);
        v.sort();
        v.dedup();
        v
    }

    /// All elements (finite rings) or all elements of height at most `bound`.
    pub fn elements(&self, bound: HeightBound) -> Vec<Element> {
        if let Some(m) = self.materialize() {
            return m.elements.clone();
        }
        let mut v = self.elements_up_to(bound);
        v.sort();
        v.dedup();
        v
    }

    /// Homogeneous elements of degree e.
    pub fn degree_e_elements(&self, bound: HeightBound) -> Vec<Element> {
        let e = self.grading().zero();
        self.homogeneous_elements(bound)
            .into_iter()
            .filter(|a| self.is_homogeneous(a).as_ref() == Some(&e))
            .collect()
    }

    pub fn is_nilpotent(&self, a: &Element) -> bool {
        if let Some(m) = self.materialize() {
            return m.table.is_nilpotent(m.idx(a));
        }
        let k = self.nil_bound(&self.zero_ideal_nf());
        self.is_zero(&self.pow(a, k))
    }

    pub fn is_unit(&self, a: &Element) -> bool {
        self.inverse(a).is_some()
    }

    pub fn inverse(&self, a: &Element) -> Option<Element> {
        if let Some(m) = self.materialize() {
            return m.table.inverse(m.idx(a)).map(|i| m.elements[i].clone());
        }
        self.quotient_inverse(&self.zero_ideal_nf(), a)
    }

    pub fn is_domain(&self) -> Flag {
        self.quotient_is_domain(&self.zero_ideal_nf())
    }

    pub fn is_local(&self) -> Flag {
        self.quotient_is_local(&self.zero_ideal_nf())
    }

    // ----- ideals ---------------------------------------------------------------

    /// The smallest graded ideal containing `gens`; inhomogeneous generators are
    /// replaced by their components.
    pub fn ideal(&self, gens: &[Element]) -> GradedIdeal {
        let mut hom: Vec<Element> = gens
            .iter()
            .flat_map(|g| self.decompose(g).into_values())
            .collect();
        hom.sort();
        hom.dedup();
        let nf = self.ideal_nf(&hom);
        GradedIdeal { gens: hom, nf }
    }

    pub fn ideal_from_nf(&self, nf: IdealNf) -> GradedIdeal {
        GradedIdeal {
            gens: self.generators_of(&nf),
            nf,
        }
    }

    /// Checks an explicit member set of a finite ring and wraps it as a graded ideal.
    pub fn ideal_from_set(&self, members: &[Element]) -> Result<GradedIdeal> {
        let m = self.materialize().ok_or(Error::NotFinite)?;
        let set = crate::bitset::BitSet::from_indices(m.table.len(), members.iter().map(|a| m.idx(a)));
        if !m.table.is_ideal(&set) {
            return Err(Error::invalid("member set is not an ideal"));
        }
        if let Some((a, c)) = m.table.graded_violation(&set) {
            return Err(Error::NotGraded {
                element: m.elements[a].clone(),
                component: m.elements[c].clone(),
            });
        }
        Ok(self.ideal_from_nf(IdealNf::Explicit(set)))
    }

    pub fn zero_ideal(&self) -> GradedIdeal {
        self.ideal(&[])
    }

    pub fn whole_ideal(&self) -> GradedIdeal {
        self.ideal(&[self.one()])
    }

    pub fn contains(&self, ideal: &GradedIdeal, a: &Element) -> bool {
        self.nf_contains(&ideal.nf, a)
    }

    pub fn is_proper(&self, ideal: &GradedIdeal) -> bool {
        !self.nf_is_whole(&ideal.nf)
    }

    pub fn ideal_eq(&self, a: &GradedIdeal, b: &GradedIdeal) -> bool {
        self.nf_eq(&a.nf, &b.nf)
    }

    pub fn ideal_le(&self, a: &GradedIdeal, b: &GradedIdeal) -> bool {
        self.nf_le(&a.nf, &b.nf)
    }

    pub fn ideal_sum(&self, a: &GradedIdeal, b: &GradedIdeal) -> GradedIdeal {
        let nf = self.nf_join(&a.nf, &b.nf);
        let mut gens = a.gens.clone();
        gens.extend(b.gens.iter().cloned());
        gens.sort();
        gens.dedup();
        GradedIdeal { gens, nf }
    }

    /// Explicit member set of an ideal of a materializable ring.
    pub fn members(&self, ideal: &GradedIdeal) -> Option<crate::bitset::BitSet> {
        self.materialize()?;
        Some(self.nf_to_explicit(&ideal.nf))
    }

    /// Cached homogeneous spectrum.
    pub fn spectrum(&self) -> Result<SpectrumPoset> {
        self.0
            .spectrum
            .get_or_init(|| crate::spectrum::g_spec_uncached(self))
            .clone()
    }

    // ----- invariant checks -------------------------------------------------------

    /// Ring axioms and grading compatibility: exhaustive on small finite rings,
    /// `AXIOM_SAMPLES` seeded random triples otherwise.
    pub fn check_axioms(&self, bound: HeightBound, seed: u64) -> Result<()> {
        if let Some(m) = self.materialize() {
            if m.table.len() <= 128 {
                m.table.check_ring_axioms()?;
                return m.table.check_grading();
            }
        }
        let pool = self.elements(bound);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zero = self.zero();
        let one = self.one();
        for _ in 0..AXIOM_SAMPLES {
            let a = pool.choose(&mut rng).expect("nonempty element pool");
            let b = pool.choose(&mut rng).unwrap();
            let c = pool.choose(&mut rng).unwrap();
            let fail = |what: &str| Err(Error::invalid(format!("{what} fails at ({a}, {b}, {c}) in {self}")));
            if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                return fail("commutativity");
            }
            if self.add(&self.add(a, b), c) != self.add(a, &self.add(b, c))
                || self.mul(&self.mul(a, b), c) != self.mul(a, &self.mul(b, c))
            {
                return fail("associativity");
            }
            if self.mul(a, &self.add(b, c)) != self.add(&self.mul(a, b), &self.mul(a, c)) {
                return fail("distributivity");
            }
            if self.add(a, &zero) != *a || self.mul(a, &one) != *a || !self.is_zero(&self.add(a, &self.neg(a))) {
                return fail("identity");
            }
            self.check_grading_at(a, b)?;
        }
        Ok(())
    }

    fn check_grading_at(&self, a: &Element, b: &Element) -> Result<()> {
        let ca = self.decompose(a);
        let sum = ca.values().fold(self.zero(), |acc, c| self.add(&acc, c));
        if sum != *a {
            return Err(Error::invalid(format!("components of {a} do not sum to it")));
        }
        for (g, x) in &ca {
            if self.is_homogeneous(x).as_ref() != Some(g) {
                return Err(Error::invalid(format!("component {x} of {a} not homogeneous of degree {g}")));
            }
            for (h, y) in self.decompose(b) {
                let p = self.mul(x, &y);
                let gh = self.grading().add(g, &h);
                if !self.is_zero(&p) && self.is_homogeneous(&p) != Some(gh.clone()) {
                    return Err(Error::invalid(format!("{x} * {y} escapes degree {gh}")));
                }
            }
        }
        Ok(())
    }

    pub fn support(&self) -> std::collections::BTreeSet<Degree> {
        self.support_mod(&self.zero_ideal_nf())
    }

    /// Components of `a` as a degree-indexed map (empty for zero).
    pub fn components(&self, a: &Element) -> BTreeMap<Degree, Element> {
        self.decompose(a)
    }
}
