//! Declarative ring specifications and the constructions that realize them.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ambient::{is_prime_u64, Ambient, MAX_CHARACTERISTIC, MAX_DECLARED_INT};
use crate::degree::{Degree, GradingGroup};
use crate::element::{AmbVal, Element};
use crate::error::{Error, Result};
use crate::finite::{FiniteRing, MAX_TABLE};
use crate::ideal::{GradedIdeal, IdealNf};
use crate::node::{idx, parse_amb, Node};
use crate::ring::{GradedRing, MATERIALIZE_LIMIT};

/// A ring-to-ring element map.
pub type ElemMap = Arc<dyn Fn(&Element) -> Element + Send + Sync>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum AmbientSpec {
    #[serde(rename = "Z")]
    Integers,
    #[serde(rename = "Fp")]
    Fp(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModuleSpec {
    /// M = A.
    #[serde(rename = "free1")]
    Free,
    /// M = A / (gens).
    #[serde(rename = "quotient")]
    Quotient(Vec<Value>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construct", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstructionSpec {
    FiniteTable {
        size: usize,
        add: Vec<Vec<u32>>,
        mul: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grading: Option<GradingGroup>,
        /// Per element: its nonzero homogeneous components as (degree, index).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        components: Option<Vec<Vec<(Vec<i64>, usize)>>>,
    },
    Zmod {
        n: u64,
    },
    SemilocalPid {
        ambient: AmbientSpec,
        primes: Vec<Value>,
    },
    TrivialExtension {
        base: Box<ConstructionSpec>,
        module: ModuleSpec,
    },
    GroupAlgebra {
        base: Box<ConstructionSpec>,
        group: GradingGroup,
    },
    TruncatedPoly {
        base: Box<ConstructionSpec>,
        n: usize,
    },
    MatrixExample {
        base: Box<ConstructionSpec>,
    },
    Quotient {
        base: Box<ConstructionSpec>,
        ideal: Vec<Value>,
    },
    Localize {
        base: Box<ConstructionSpec>,
        elements: Vec<Value>,
    },
    Product {
        left: Box<ConstructionSpec>,
        right: Box<ConstructionSpec>,
    },
}

fn paren(r: &GradedRing) -> String {
    let d = r.description();
    if d.contains(' ') {
        format!("({d})")
    } else {
        d.to_string()
    }
}

pub fn zero_ring(grading: GradingGroup) -> GradedRing {
    GradedRing::from_node(Node::Table(Arc::new(FiniteRing::zero_ring(grading.clone()))), grading, "0")
}

/// Builds and validates the ring described by `spec`.
pub fn build_ring(spec: &ConstructionSpec) -> Result<GradedRing> {
    match spec {
        ConstructionSpec::FiniteTable { size, add, mul, grading, components } => {
            let n = *size;
            if n == 0 || n > MAX_TABLE {
                return Err(Error::invalid(format!("table size must lie in 1..={MAX_TABLE}")));
            }
            let flat = |t: &Vec<Vec<u32>>, what: &str| -> Result<Vec<u32>> {
                if t.len() != n || t.iter().any(|row| row.len() != n) {
                    return Err(Error::invalid(format!("{what} table must be {n}x{n}")));
                }
                Ok(t.iter().flatten().copied().collect())
            };
            let grading = grading.clone().unwrap_or(GradingGroup::Trivial);
            grading.validate()?;
            let comps = match components {
                None => None,
                Some(cs) => {
                    if cs.len() != n {
                        return Err(Error::invalid("components must list every element"));
                    }
                    let mut out = vec![];
                    for list in cs {
                        let mut row = vec![];
                        for (d, i) in list {
                            let d = grading.normalize(Degree(d.clone()));
                            if !grading.contains(&d) {
                                return Err(Error::invalid(format!("degree {d:?} not in {grading}")));
                            }
                            if *i >= n {
                                return Err(Error::invalid("component index out of range"));
                            }
                            row.push((d, *i));
                        }
                        row.sort();
                        out.push(row);
                    }
                    Some(out)
                }
            };
            let t = FiniteRing::from_tables(n, flat(add, "add")?, flat(mul, "mul")?, grading.clone(), comps, true)?;
            Ok(GradedRing::from_node(Node::Table(Arc::new(t)), grading, format!("T{n}")))
        }
        ConstructionSpec::Zmod { n } => {
            if *n == 0 {
                return Err(Error::invalid("Zmod needs n >= 1"));
            }
            if *n > MAX_DECLARED_INT as u64 {
                return Err(Error::OverflowRisk(format!("modulus {n} exceeds {MAX_DECLARED_INT}")));
            }
            if *n == 1 {
                return Ok(zero_ring(GradingGroup::Trivial));
            }
            Ok(GradedRing::from_node(
                Node::Residue { ambient: Ambient::Integers, modulus: AmbVal::Int(*n as i64) },
                GradingGroup::Trivial,
                format!("Z/{n}"),
            ))
        }
        ConstructionSpec::SemilocalPid { ambient, primes } => {
            let amb = match ambient {
                AmbientSpec::Integers => Ambient::Integers,
                AmbientSpec::Fp(p) => {
                    if *p > MAX_CHARACTERISTIC {
                        return Err(Error::OverflowRisk(format!("characteristic {p} exceeds {MAX_CHARACTERISTIC}")));
                    }
                    if !is_prime_u64(*p as u64) {
                        return Err(Error::invalid(format!("{p} is not prime")));
                    }
                    Ambient::Poly(*p)
                }
            };
            if primes.is_empty() {
                return Err(Error::invalid("semilocal PID needs at least one prime"));
            }
            let mut ps: Vec<AmbVal> = vec![];
            for v in primes {
                let p = parse_amb(&amb, v)?;
                if amb.canonical(&p).0 != p || !amb.is_prime(&p) {
                    return Err(Error::invalid(format!("{p} is not a canonical prime")));
                }
                if ps.contains(&p) {
                    return Err(Error::invalid(format!("prime {p} listed twice")));
                }
                ps.push(p);
            }
            let names: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
            let desc = match amb {
                Ambient::Integers => format!("Z_({})", names.join(",")),
                Ambient::Poly(p) => format!("F{p}[t]_({})", names.join(",")),
            };
            Ok(GradedRing::from_node(Node::Pid { ambient: amb, primes: ps }, GradingGroup::Trivial, desc))
        }
        ConstructionSpec::TrivialExtension { base, module } => {
            let a = classical_base(build_ring(base)?)?;
            let (relations, mdesc) = match module {
                ModuleSpec::Free => (a.zero_ideal_nf(), paren(&a)),
                ModuleSpec::Quotient(gens) => {
                    let gs: Vec<Element> = gens.iter().map(|g| a.parse_element(g)).collect::<Result<_>>()?;
                    let i = a.ideal(&gs);
                    (i.nf.clone(), format!("{}/{}", paren(&a), i.label()))
                }
            };
            let desc = format!("{} ⋉ {mdesc}", paren(&a));
            Ok(GradedRing::from_node(Node::TrivialExt { base: a, relations }, GradingGroup::Cyclic(2), desc))
        }
        ConstructionSpec::GroupAlgebra { base, group } => {
            group.validate()?;
            let members = group
                .elements()
                .ok_or_else(|| Error::invalid("group algebras need a finite group"))?;
            let a = classical_base(build_ring(base)?)?;
            if !a.is_finite() {
                return Err(Error::UnsupportedConstruction("group algebra over an infinite base".into()));
            }
            let desc = format!("{}[{group}]", paren(&a));
            Ok(GradedRing::from_node(Node::GroupAlgebra { base: a, members }, group.clone(), desc))
        }
        ConstructionSpec::TruncatedPoly { base, n } => {
            if *n == 0 {
                return Err(Error::invalid("truncation degree must be at least 1"));
            }
            if *n > 64 {
                return Err(Error::OverflowRisk(format!("truncation degree {n} too large")));
            }
            let b = classical_base(build_ring(base)?)?;
            let desc = format!("{}[x]/(x^{n})", paren(&b));
            Ok(GradedRing::from_node(Node::Truncated { base: b, n: *n }, GradingGroup::Integers, desc))
        }
        ConstructionSpec::MatrixExample { base } => {
            let a = classical_base(build_ring(base)?)?;
            let desc = format!("M({})", a.description());
            let ring = GradedRing::from_node(Node::Matrix { base: a.clone() }, GradingGroup::Cyclic(2), desc);
            if a.cardinality().is_some_and(|c| c.saturating_mul(c) <= MATERIALIZE_LIMIT) {
                check_matrix_isomorphism(&ring, &a)?;
            }
            Ok(ring)
        }
        ConstructionSpec::Quotient { base, ideal } => {
            let b = build_ring(base)?;
            let gens: Vec<Element> = ideal.iter().map(|g| b.parse_element(g)).collect::<Result<_>>()?;
            let i = b.ideal(&gens);
            quotient(&b, &i)
        }
        ConstructionSpec::Localize { base, elements } => {
            let b = build_ring(base)?;
            let s: Vec<Element> = elements.iter().map(|g| b.parse_element(g)).collect::<Result<_>>()?;
            Ok(localize(&b, &s)?.0)
        }
        ConstructionSpec::Product { left, right } => {
            let (l, r) = (build_ring(left)?, build_ring(right)?);
            if l.grading() != r.grading() {
                return Err(Error::invalid("product factors must share a grading group"));
            }
            Ok(product(&l, &r))
        }
    }
}

pub fn product(l: &GradedRing, r: &GradedRing) -> GradedRing {
    let desc = format!("{} × {}", paren(l), paren(r));
    GradedRing::from_node(Node::Product(l.clone(), r.clone()), l.grading().clone(), desc)
}

/// Bases of the graded constructions must be trivially graded; finite graded bases
/// lose their grading.
fn classical_base(r: GradedRing) -> Result<GradedRing> {
    if r.is_trivially_graded() {
        return Ok(r);
    }
    if r.materialize().is_some() {
        return Ok(forget_grading(&r)?.0);
    }
    Err(Error::UnsupportedConstruction(format!("{r} must be trivially graded to serve as a base")))
}

/// MatrixExample(A) ≅ A ⋉ A via [[a, b], [0, a]] ↦ (a, b), checked on tables.
fn check_matrix_isomorphism(matrix: &GradedRing, a: &GradedRing) -> Result<()> {
    let triv = GradedRing::from_node(
        Node::TrivialExt { base: a.clone(), relations: a.zero_ideal_nf() },
        GradingGroup::Cyclic(2),
        "A ⋉ A",
    );
    let (mm, tm) = match (matrix.materialize(), triv.materialize()) {
        (Some(m), Some(t)) => (m, t),
        _ => return Ok(()),
    };
    let map: Vec<usize> = mm
        .elements
        .iter()
        .map(|x| {
            let p = x.parts();
            tm.idx(&Element::tuple([p[0].clone(), p[1].clone()]))
        })
        .collect();
    if mm.table.is_graded_isomorphism(&tm.table, &map) {
        Ok(())
    } else {
        Err(Error::TheoremViolation(format!("{matrix} is not isomorphic to the trivial extension")))
    }
}

/// The same finite ring with the trivial grading, plus the carrier map.
pub fn forget_grading(r: &GradedRing) -> Result<(GradedRing, ElemMap)> {
    let m = r.materialize().ok_or(Error::NotFinite)?;
    let t = m.table.forget_grading();
    let desc = format!("{} (ungraded)", paren(r));
    let ring = GradedRing::from_node(Node::Table(Arc::new(t)), GradingGroup::Trivial, desc);
    let map: ElemMap = Arc::new(move |x| Element::Idx(m.idx(x)));
    Ok((ring, map))
}

/// R/I for a proper graded ideal, with the canonical projection.
pub fn quotient_with_map(r: &GradedRing, ideal: &GradedIdeal) -> Result<(GradedRing, ElemMap)> {
    if !r.is_proper(ideal) {
        return Err(Error::ImproperIdeal);
    }
    let desc = format!("{}/{}", paren(r), ideal.label());
    if let Node::Table(t) = r.node() {
        let set = r.nf_to_explicit(&ideal.nf);
        let (q, proj) = t.quotient(&set)?;
        let ring = GradedRing::from_node(Node::Table(Arc::new(q)), r.grading().clone(), desc);
        return Ok((ring, Arc::new(move |x| Element::Idx(proj[idx(x)]))));
    }
    let (base, nf) = match (r.node(), &ideal.nf) {
        (Node::Quotient { base, .. }, IdealNf::Lift(inner)) => (base.clone(), inner.as_ref().clone()),
        _ => (r.clone(), ideal.nf.clone()),
    };
    let ring = GradedRing::from_node(Node::Quotient { base: base.clone(), ideal: nf.clone() }, r.grading().clone(), desc);
    Ok((ring, Arc::new(move |x| base.nf_reduce(&nf, x))))
}

pub fn quotient(r: &GradedRing, ideal: &GradedIdeal) -> Result<GradedRing> {
    Ok(quotient_with_map(r, ideal)?.0)
}

/// Homogeneous localization S^-1 R with the canonical map R -> S^-1 R.
pub fn localize(r: &GradedRing, s: &[Element]) -> Result<(GradedRing, ElemMap)> {
    for x in s {
        if r.is_homogeneous(x).is_none() {
            return Err(Error::NotHomogeneous(x.clone()));
        }
    }
    let names: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    let desc = format!("{}[1/({})]", paren(r), names.join(", "));
    let grading = r.grading().clone();
    let zero = || -> (GradedRing, ElemMap) { (zero_ring(grading.clone()), Arc::new(|_: &Element| Element::Idx(0))) };
    if s.iter().any(|x| r.is_zero(x)) {
        return Ok(zero());
    }
    if let Some(m) = r.materialize() {
        let gens: Vec<usize> = s.iter().map(|x| m.idx(x)).collect();
        let (q, proj) = m.table.localize(&gens)?;
        if q.is_zero_ring() {
            return Ok(zero());
        }
        let ring = GradedRing::from_node(Node::Table(Arc::new(q)), grading, desc);
        return Ok((ring, Arc::new(move |x| Element::Idx(proj[m.idx(x)]))));
    }
    let degree_zero = |x: &Element| r.is_homogeneous(x).is_some_and(|d| r.grading().is_zero(&d));
    match r.node() {
        Node::Pid { ambient, primes } => {
            let keep: Vec<AmbVal> = primes
                .iter()
                .filter(|p| {
                    s.iter().all(|x| match x {
                        Element::Frac(n, _) => ambient.valuation(n, p) == 0,
                        _ => unreachable!(),
                    })
                })
                .cloned()
                .collect();
            let node = Node::Pid { ambient: ambient.clone(), primes: keep };
            Ok((GradedRing::from_node(node, grading, desc), Arc::new(|x: &Element| x.clone())))
        }
        Node::TrivialExt { base, relations } => {
            if !s.iter().all(degree_zero) {
                return Ok(zero());
            }
            let scal: Vec<Element> = s.iter().map(|x| x.parts()[0].clone()).collect();
            let (a2, f) = localize(base, &scal)?;
            if a2.is_zero_ring() {
                return Ok(zero());
            }
            let rel_gens: Vec<Element> = base.generators_of(relations).iter().map(|g| f(g)).collect();
            let rel = a2.ideal(&rel_gens).nf;
            let node = Node::TrivialExt { base: a2.clone(), relations: rel.clone() };
            let ring = GradedRing::from_node(node, grading, desc);
            let map: ElemMap = Arc::new(move |x: &Element| {
                let p = x.parts();
                Element::tuple([f(&p[0]), a2.nf_reduce(&rel, &f(&p[1]))])
            });
            Ok((ring, map))
        }
        Node::Matrix { base } => {
            if !s.iter().all(degree_zero) {
                return Ok(zero());
            }
            let scal: Vec<Element> = s.iter().map(|x| x.parts()[0].clone()).collect();
            let (a2, f) = localize(base, &scal)?;
            if a2.is_zero_ring() {
                return Ok(zero());
            }
            let ring = GradedRing::from_node(Node::Matrix { base: a2 }, grading, desc);
            Ok((ring, Arc::new(move |x: &Element| Element::tuple(x.parts().iter().map(|c| f(c))))))
        }
        Node::Truncated { base, n } => {
            if !s.iter().all(degree_zero) {
                return Ok(zero());
            }
            let scal: Vec<Element> = s.iter().map(|x| x.parts()[0].clone()).collect();
            let (b2, f) = localize(base, &scal)?;
            if b2.is_zero_ring() {
                return Ok(zero());
            }
            let ring = GradedRing::from_node(Node::Truncated { base: b2, n: *n }, grading, desc);
            Ok((ring, Arc::new(move |x: &Element| Element::tuple(x.parts().iter().map(|c| f(c))))))
        }
        Node::Product(l, rr) => {
            let ls: Vec<Element> = s.iter().map(|x| x.parts()[0].clone()).collect();
            let rs: Vec<Element> = s.iter().map(|x| x.parts()[1].clone()).collect();
            let (l2, fl) = localize(l, &ls)?;
            let (r2, fr) = localize(rr, &rs)?;
            if l2.is_zero_ring() && r2.is_zero_ring() {
                return Ok(zero());
            }
            let node = Node::Product(l2, r2);
            let ring = GradedRing::from_node(node, grading, desc);
            Ok((ring, Arc::new(move |x: &Element| {
                let p = x.parts();
                Element::tuple([fl(&p[0]), fr(&p[1])])
            })))
        }
        Node::Quotient { base, ideal } => {
            let (b2, f) = localize(base, s)?;
            let gens: Vec<Element> = base.generators_of(ideal).iter().map(|g| f(g)).collect();
            let i2 = b2.ideal(&gens);
            if !b2.is_proper(&i2) {
                return Ok(zero());
            }
            let (ring, g) = quotient_with_map(&b2, &i2)?;
            let ring = GradedRing::from_node_like(&ring, desc);
            Ok((ring, Arc::new(move |x: &Element| g(&f(x)))))
        }
        Node::Table(_) | Node::Residue { .. } | Node::GroupAlgebra { .. } => Err(Error::UnsupportedConstruction(
            format!("localization of {r}: too large to tabulate"),
        )),
    }
}

/// The trivially graded subring R_e with its embedding into R.
pub fn degree_e_ring(r: &GradedRing) -> Result<(GradedRing, ElemMap)> {
    if r.is_trivially_graded() {
        return Ok((r.clone(), Arc::new(|x: &Element| x.clone())));
    }
    let desc = format!("{}_e", paren(r));
    match r.node() {
        Node::Table(t) => {
            let (sub, emb) = t.degree_e_subring();
            let ring = GradedRing::from_node(Node::Table(Arc::new(sub)), GradingGroup::Trivial, desc);
            Ok((ring, Arc::new(move |x: &Element| Element::Idx(emb[idx(x)]))))
        }
        Node::TrivialExt { base, .. } => {
            let z = base.zero();
            Ok((base.clone(), Arc::new(move |x: &Element| Element::tuple([x.clone(), z.clone()]))))
        }
        Node::Matrix { base } => {
            let z = base.zero();
            Ok((base.clone(), Arc::new(move |x: &Element| {
                Element::tuple([x.clone(), z.clone(), z.clone(), x.clone()])
            })))
        }
        Node::GroupAlgebra { base, members } => {
            let slot = members.iter().position(|g| r.grading().is_zero(g)).expect("identity");
            let (z, k) = (base.zero(), members.len());
            Ok((base.clone(), Arc::new(move |x: &Element| {
                let mut v = vec![z.clone(); k];
                v[slot] = x.clone();
                Element::Tuple(v)
            })))
        }
        Node::Truncated { base, n } => {
            let (z, n) = (base.zero(), *n);
            Ok((base.clone(), Arc::new(move |x: &Element| {
                let mut v = vec![z.clone(); n];
                v[0] = x.clone();
                Element::Tuple(v)
            })))
        }
        Node::Product(l, rr) => {
            let (le, fl) = degree_e_ring(l)?;
            let (re, fr) = degree_e_ring(rr)?;
            let ring = GradedRing::from_node_like(&product(&le, &re), desc);
            Ok((ring, Arc::new(move |x: &Element| {
                let p = x.parts();
                Element::tuple([fl(&p[0]), fr(&p[1])])
            })))
        }
        Node::Quotient { base, ideal } => {
            if let Some(m) = r.materialize() {
                let (sub, emb) = m.table.degree_e_subring();
                let ring = GradedRing::from_node(Node::Table(Arc::new(sub)), GradingGroup::Trivial, desc);
                return Ok((ring, Arc::new(move |x: &Element| m.elements[emb[idx(x)]].clone())));
            }
            let (be, f) = degree_e_ring(base)?;
            let part = degree_e_part(base, &be, &f, ideal)?;
            let ring = GradedRing::from_node_like(&quotient(&be, &part)?, desc);
            let (b, nf) = (base.clone(), ideal.clone());
            Ok((ring, Arc::new(move |x: &Element| b.nf_reduce(&nf, &f(x)))))
        }
        Node::Residue { .. } | Node::Pid { .. } => unreachable!("classical nodes are trivially graded"),
    }
}

/// I ∩ R_e as an ideal of R_e, given the embedding R_e -> R.
fn degree_e_part(r: &GradedRing, re: &GradedRing, emb: &ElemMap, nf: &IdealNf) -> Result<GradedIdeal> {
    let nf_e = match (r.node(), nf) {
        (_, IdealNf::Explicit(_)) => {
            let members: Vec<Element> = re
                .all_elements()
                .ok_or(Error::NotFinite)?
                .into_iter()
                .filter(|x| r.nf_contains(nf, &emb(x)))
                .collect();
            return re.ideal_from_set(&members);
        }
        (Node::TrivialExt { .. } | Node::Matrix { .. }, IdealNf::Pair(i0, _)) => i0.as_ref().clone(),
        (Node::Truncated { .. }, IdealNf::Graded(js)) => js[0].clone(),
        (Node::GroupAlgebra { .. }, IdealNf::Coeff(i)) => i.as_ref().clone(),
        (Node::Product(l, rr), IdealNf::Pair(i, j)) => {
            let (le, fl) = degree_e_ring(l)?;
            let (ree, fr) = degree_e_ring(rr)?;
            let a = degree_e_part(l, &le, &fl, i)?;
            let b = degree_e_part(rr, &ree, &fr, j)?;
            IdealNf::pair(a.nf, b.nf)
        }
        _ => nf.clone(),
    };
    Ok(re.ideal_from_nf(nf_e))
}
