//! Grading groups (finitely generated abelian, written additively) and their elements.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingGroup {
    Trivial,
    Cyclic(u64),
    Integers,
    Product(Vec<u64>),
}

/// A group element as a coordinate vector; coordinates of finite factors are kept reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(pub Vec<i64>);

impl GradingGroup {
    pub fn validate(&self) -> Result<()> {
        match self {
            GradingGroup::Cyclic(0) => Err(Error::invalid("cyclic grading group of order 0")),
            GradingGroup::Product(ms) if ms.is_empty() || ms.contains(&0) => {
                Err(Error::invalid("product grading group needs positive moduli"))
            }
            _ => Ok(()),
        }
    }

    fn moduli(&self) -> Vec<Option<u64>> {
        match self {
            GradingGroup::Trivial => vec![],
            GradingGroup::Cyclic(n) => vec![Some(*n)],
            GradingGroup::Integers => vec![None],
            GradingGroup::Product(ms) => ms.iter().map(|&m| Some(m)).collect(),
        }
    }

    pub fn zero(&self) -> Degree {
        let d = Degree(vec![0; self.moduli().len()]);
        self.normalize(d)
    }

    pub fn normalize(&self, d: Degree) -> Degree {
        Degree(
            d.0.into_iter()
                .zip(self.moduli())
                .map(|(x, m)| match m {
                    Some(m) => x.rem_euclid(m as i64),
                    None => x,
                })
                .collect(),
        )
    }

    pub fn add(&self, a: &Degree, b: &Degree) -> Degree {
        self.normalize(Degree(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect()))
    }

    pub fn neg(&self, a: &Degree) -> Degree {
        self.normalize(Degree(a.0.iter().map(|x| -x).collect()))
    }

    pub fn scale(&self, a: &Degree, k: i64) -> Degree {
        self.normalize(Degree(a.0.iter().map(|x| x * k).collect()))
    }

    pub fn is_zero(&self, a: &Degree) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    pub fn is_torsion(&self) -> bool {
        !matches!(self, GradingGroup::Integers)
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            GradingGroup::Trivial => true,
            GradingGroup::Cyclic(1) => true,
            GradingGroup::Product(ms) => ms.iter().all(|&m| m == 1),
            _ => false,
        }
    }

    /// Order of `a`, or `None` when it has infinite order.
    pub fn order(&self, a: &Degree) -> Option<u64> {
        let mut lcm = 1u64;
        for (x, m) in a.0.iter().zip(self.moduli()) {
            match m {
                Some(m) => {
                    let ord = m / gcd_u64(*x as u64, m);
                    lcm = lcm / gcd_u64(lcm, ord) * ord;
                }
                None if *x != 0 => return None,
                None => {}
            }
        }
        Some(lcm)
    }

    /// All group elements, when the group is finite.
    pub fn elements(&self) -> Option<Vec<Degree>> {
        let mut out = vec![Degree(vec![])];
        for m in self.moduli() {
            let m = m?;
            out = out
                .into_iter()
                .flat_map(|d| {
                    (0..m as i64).map(move |x| {
                        let mut v = d.0.clone();
                        v.push(x);
                        Degree(v)
                    })
                })
                .collect();
        }
        Some(out)
    }

    pub fn contains(&self, a: &Degree) -> bool {
        a.0.len() == self.moduli().len() && *a == self.normalize(a.clone())
    }

    pub fn parse_degree(&self, v: &serde_json::Value) -> Result<Degree> {
        let coords: Vec<i64> = match v {
            serde_json::Value::Number(n) => vec![n
                .as_i64()
                .ok_or_else(|| Error::parse("degree", "not an integer"))?],
            serde_json::Value::Array(xs) => xs
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::parse("degree", "not an integer")))
                .collect::<Result<_>>()?,
            _ => return Err(Error::parse("degree", "expected integer or array")),
        };
        let coords = if matches!(self, GradingGroup::Trivial) && coords == [0] {
            vec![]
        } else {
            coords
        };
        let d = Degree(coords);
        if d.0.len() != self.moduli().len() {
            return Err(Error::parse("degree", format!("wrong arity for {self}")));
        }
        Ok(self.normalize(d))
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

impl fmt::Display for GradingGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingGroup::Trivial => write!(f, "1"),
            GradingGroup::Cyclic(n) => write!(f, "Z{n}"),
            GradingGroup::Integers => write!(f, "Z"),
            GradingGroup::Product(ms) => {
                let parts: Vec<String> = ms.iter().map(|m| format!("Z{m}")).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [] => write!(f, "e"),
            [x] => write!(f, "{x}"),
            xs => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups() -> Vec<GradingGroup> {
        vec![
            GradingGroup::Trivial,
            GradingGroup::Cyclic(2),
            GradingGroup::Cyclic(6),
            GradingGroup::Product(vec![2, 3]),
        ]
    }

    #[test]
    fn finite_groups_satisfy_abelian_group_axioms() {
        for g in groups() {
            let els = g.elements().unwrap();
            let e = g.zero();
            for a in &els {
                assert_eq!(g.add(a, &e), *a);
                assert!(g.is_zero(&g.add(a, &g.neg(a))));
                for b in &els {
                    assert_eq!(g.add(a, b), g.add(b, a));
                    for c in &els {
                        assert_eq!(g.add(&g.add(a, b), c), g.add(a, &g.add(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn torsion_flag_matches_finite_orders() {
        for g in groups() {
            assert!(g.is_torsion());
            for a in g.elements().unwrap() {
                let n = g.order(&a).unwrap();
                assert!(g.is_zero(&g.scale(&a, n as i64)));
            }
        }
        let z = GradingGroup::Integers;
        assert!(!z.is_torsion());
        assert_eq!(z.order(&Degree(vec![3])), None);
        assert_eq!(z.order(&Degree(vec![0])), Some(1));
    }

    #[test]
    fn product_order_is_lcm() {
        let g = GradingGroup::Product(vec![2, 3]);
        assert_eq!(g.order(&Degree(vec![1, 1])), Some(6));
        assert_eq!(g.elements().unwrap().len(), 6);
    }
}
