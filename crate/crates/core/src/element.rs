use std::fmt;

use serde::{Deserialize, Serialize};

/// A value of a Euclidean ambient domain: an integer or a polynomial over a prime
/// field (coefficients low to high, no trailing zeros).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AmbVal {
    Int(i64),
    Poly(Vec<u32>),
}

/// Ring element payload. Its meaning depends on the ring that owns it.
/// Serializes as its display form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// Carrier index of a finite table ring.
    Idx(usize),
    /// Canonical residue in ambient / (n).
    Res(AmbVal),
    /// Reduced fraction of a semilocal principal ideal domain.
    Frac(AmbVal, AmbVal),
    /// Components of a compound construction.
    Tuple(Vec<Element>),
}

impl Element {
    pub fn tuple(items: impl IntoIterator<Item = Element>) -> Element {
        Element::Tuple(items.into_iter().collect())
    }

    /// Tuple components; panics on leaf payloads (a ring-internal invariant).
    pub fn parts(&self) -> &[Element] {
        match self {
            Element::Tuple(xs) => xs,
            other => panic!("expected a tuple element, found {other:?}"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for AmbVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbVal::Int(n) => write!(f, "{n}"),
            AmbVal::Poly(cs) => {
                if cs.is_empty() {
                    return write!(f, "0");
                }
                let mut terms = Vec::new();
                for (i, &c) in cs.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
                    terms.push(match i {
                        0 => coeff,
                        1 => format!("{coeff}t"),
                        _ => format!("{coeff}t^{i}"),
                    });
                }
                write!(f, "{}", terms.join("+"))
            }
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Idx(i) => write!(f, "#{i}"),
            Element::Res(v) => write!(f, "{v}"),
            Element::Frac(n, d) => match d {
                AmbVal::Int(1) => write!(f, "{n}"),
                AmbVal::Poly(cs) if cs.as_slice() == [1] => write!(f, "{n}"),
                _ => write!(f, "({n})/({d})"),
            },
            Element::Tuple(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}
