//! Graded ideals in canonical normal form.

use std::fmt;

use crate::bitset::BitSet;
use crate::element::{AmbVal, Element};

/// Canonical data of a graded ideal; the variant is determined by the owning ring's
/// constructor. Two ideals of the same ring are equal iff their normal forms are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdealNf {
    /// Explicit member set over the ring's materialized carrier.
    Explicit(BitSet),
    /// Residue rings: the ideal (d) for a canonical divisor d of the modulus.
    Divisor(AmbVal),
    /// Semilocal PIDs: `None` is the zero ideal, otherwise the valuation at each listed prime.
    Valuation(Option<Vec<u32>>),
    /// Trivial extensions and matrix rings: (I0, N) with N an ideal of the base
    /// containing I0 and the module relations. Products: (left, right).
    Pair(Box<IdealNf>, Box<IdealNf>),
    /// Group algebras: I[G] for an ideal I of the coefficient ring.
    Coeff(Box<IdealNf>),
    /// Truncated polynomial rings: an increasing chain of coefficient ideals, one per degree.
    Graded(Vec<IdealNf>),
    /// Quotient rings: the preimage in the base ring.
    Lift(Box<IdealNf>),
}

impl IdealNf {
    pub fn pair(a: IdealNf, b: IdealNf) -> IdealNf {
        IdealNf::Pair(Box::new(a), Box::new(b))
    }
}

/// A graded ideal together with homogeneous generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedIdeal {
    pub(crate) gens: Vec<Element>,
    pub(crate) nf: IdealNf,
}

impl GradedIdeal {
    pub fn generators(&self) -> &[Element] {
        &self.gens
    }

    pub fn normal_form(&self) -> &IdealNf {
        &self.nf
    }

    pub fn label(&self) -> String {
        if self.gens.is_empty() {
            return "(0)".to_string();
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for GradedIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
