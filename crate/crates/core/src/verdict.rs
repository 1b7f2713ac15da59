//! Three-valued verdicts with witnesses.

use serde::Serialize;

use crate::degree::Degree;
use crate::element::Element;
use crate::ring::Flag;

/// How a verdict was reached: from the spectrum poset, or from an element search
/// (exhaustive on finite rings, bounded otherwise).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Authority {
    Poset,
    Search,
}

/// A spectrum point: its canonical index and label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Point {
    pub index: usize,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Nothing to exhibit: the check ran over every case, or there were none.
    Exhaustive,
    /// A structural rule settles the verdict.
    Rule { reason: String },
    /// r * r_prime = 0 with r outside every prime in `r_avoids` and r_prime outside
    /// every prime in `r_prime_avoids`.
    AnnPair { r: Element, r_prime: Element, r_avoids: Vec<Point>, r_prime_avoids: Vec<Point> },
    /// r(P) = 0 on `zero_on` and r(P) = 1 on `one_on`.
    UrysohnFn { r: Element, zero_on: Vec<Point>, one_on: Vec<Point> },
    ComaxPair { a: Element, b: Element, c: Element },
    ComaxFailure { a: Element, reason: String },
    /// x outside M, y outside M', and every graded maximal contains x or y, so
    /// D(x) and D(y) are disjoint neighbourhoods in GMax.
    SeparatingOpens { x: Element, y: Element, m: Point, m_prime: Point },
    RetractMap { map: Vec<(Point, Point)> },
    PrimeBelowTwoMax { p: Point, m: Point, m_prime: Point },
    IncomparablePair { p: Point, q: Point, below: Point },
    NormalityViolation { p: Point, q: Point, common: Point },
    /// `set_of` names the point whose set fails to be an up-set; `missing` lies above
    /// `inside` but outside the set.
    NotClosed { set_of: Point, inside: Point, missing: Point },
    NonChainQuotient { minimal: Point, p: String, q: String },
    SameDegreePair { q: Point, q_prime: Point, degree: Degree, r: Element, r_prime: Element },
    NoSameDegreePair { q: Point, q_prime: Point },
    AvoidanceFailure { i: String, j: String, j_prime: String },
    IncomparableIdeals { j: String, j_prime: String },
    Prime { q: Point },
    HomogeneousPair { a: Element, b: Element },
    UnseparatedMaximals { m: Point, m_prime: Point },
    Localization { t: Element, detail: String },
    Ideal { label: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "value", rename_all = "snake_case")]
pub enum Verdict {
    True { authority: Authority, witness: Witness },
    False { authority: Authority, witness: Witness },
    Unknown { bound: u32 },
}

impl Verdict {
    pub fn yes(authority: Authority, witness: Witness) -> Verdict {
        Verdict::True { authority, witness }
    }

    pub fn no(authority: Authority, witness: Witness) -> Verdict {
        Verdict::False { authority, witness }
    }

    pub fn flag(&self) -> Flag {
        match self {
            Verdict::True { .. } => Flag::True,
            Verdict::False { .. } => Flag::False,
            Verdict::Unknown { .. } => Flag::Unknown,
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Verdict::True { .. })
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Verdict::False { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn authority(&self) -> Option<Authority> {
        match self {
            Verdict::True { authority, .. } | Verdict::False { authority, .. } => Some(*authority),
            Verdict::Unknown { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::True { witness, .. } | Verdict::False { witness, .. } => Some(witness),
            Verdict::Unknown { .. } => None,
        }
    }

    /// Conjunction over cases: any False wins, then any Unknown, else True.
    pub fn all(cases: impl IntoIterator<Item = Verdict>, authority: Authority) -> Verdict {
        let mut unknown = None;
        let mut first_true = None;
        for v in cases {
            match v {
                Verdict::False { .. } => return v,
                Verdict::Unknown { .. } => unknown = unknown.or(Some(v)),
                Verdict::True { .. } => first_true = first_true.or(Some(v)),
            }
        }
        if let Some(u) = unknown {
            return u;
        }
        match first_true {
            Some(t) => t,
            None => Verdict::yes(authority, Witness::Exhaustive),
        }
    }
}
