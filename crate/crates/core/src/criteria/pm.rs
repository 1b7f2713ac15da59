//! pm+ criteria, the (Av)/(Cm)/(PCm) conditions, and the localization chain.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gelfand::gelfand_on;
use super::{find_zero_product, hom, CriteriaReport, Harness};
use crate::bitset::BitSet;
use crate::construct::{localize, quotient};
use crate::degree::Degree;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ring::{GradedRing, HeightBound};
use crate::spectrum::{check_localization_transfer, enumerate_graded_ideals, PrimeId, SpectrumPoset};
use crate::topology::{c_set, is_closed, normality_violation};
use crate::verdict::{Authority, Verdict, Witness};

/// Samples per kind in the stability check.
const STABILITY_SAMPLES: usize = 4;

fn rule(reason: &str) -> Witness {
    Witness::Rule { reason: reason.into() }
}

/// An incomparable pair above a common prime, if any.
fn branching(spec: &SpectrumPoset) -> Option<(PrimeId, PrimeId, PrimeId)> {
    let po = &spec.poset;
    for p in 0..spec.len() {
        let up = po.up(p).to_vec();
        for (i, &a) in up.iter().enumerate() {
            for &b in &up[i + 1..] {
                if !po.le(a, b) && !po.le(b, a) {
                    return Some((a, b, p));
                }
            }
        }
    }
    None
}

pub(crate) fn pm_on(spec: &SpectrumPoset) -> Verdict {
    match branching(spec) {
        Some((a, b, p)) => Verdict::no(
            Authority::Poset,
            Witness::IncomparablePair {
                p: spec.point(a),
                q: spec.point(b),
                below: spec.point(p),
            },
        ),
        None => Verdict::yes(Authority::Poset, Witness::Exhaustive),
    }
}

/// The primes above each homogeneous prime form a chain.
pub fn pm_by_definition(ring: &GradedRing) -> Result<Verdict> {
    Ok(pm_on(&ring.spectrum()?))
}

/// C(P), the primes comparable with P, is closed for every P.
pub fn cp_criterion(ring: &GradedRing) -> Result<Verdict> {
    let spec = ring.spectrum()?;
    let po = &spec.poset;
    for p in 0..spec.len() {
        let c = c_set(po, p);
        if !is_closed(po, &c) {
            let (inside, missing) = c
                .iter()
                .find_map(|q| po.up(q).iter().find(|&r| !c.contains(r)).map(|r| (q, r)))
                .expect("a set that is not an up-set has an escaping point");
            return Ok(Verdict::no(
                Authority::Poset,
                Witness::NotClosed {
                    set_of: spec.point(p),
                    inside: spec.point(inside),
                    missing: spec.point(missing),
                },
            ));
        }
    }
    Ok(Verdict::yes(Authority::Poset, Witness::Exhaustive))
}

/// R/m has linearly ordered homogeneous primes for every minimal homogeneous prime m.
pub fn pm_quotient_criterion(ring: &GradedRing) -> Result<Verdict> {
    let spec = ring.spectrum()?;
    for m in spec.poset.minimal() {
        let q = quotient(ring, &spec.primes[m])?;
        let qs = q.spectrum()?;
        let all = BitSet::full(qs.len());
        if !qs.poset.is_chain_set(&all) {
            let (a, b) = (0..qs.len())
                .flat_map(|a| (0..qs.len()).map(move |b| (a, b)))
                .find(|&(a, b)| !qs.poset.le(a, b) && !qs.poset.le(b, a))
                .expect("a non-chain has an incomparable pair");
            return Ok(Verdict::no(
                Authority::Poset,
                Witness::NonChainQuotient {
                    minimal: spec.point(m),
                    p: qs.label(a),
                    q: qs.label(b),
                },
            ));
        }
    }
    Ok(Verdict::yes(Authority::Poset, Witness::Exhaustive))
}

/// For incomparable P, Q: homogeneous r outside P and r' outside Q with rr' = 0.
/// Such a pair exists iff no homogeneous prime lies in P ∩ Q, so a common lower
/// prime decides False exactly.
pub fn pm_witness_criterion(ring: &GradedRing, bound: HeightBound) -> Result<Verdict> {
    let spec = ring.spectrum()?;
    let po = &spec.poset;
    let h = hom(ring, bound);
    let mut unknown = false;
    let mut last = None;
    for p in 0..spec.len() {
        for q in p + 1..spec.len() {
            if po.le(p, q) || po.le(q, p) {
                continue;
            }
            if let Some(below) = po.down(p).intersection(&po.down(q)).iter().next() {
                return Ok(Verdict::no(
                    Authority::Poset,
                    Witness::IncomparablePair {
                        p: spec.point(p),
                        q: spec.point(q),
                        below: spec.point(below),
                    },
                ));
            }
            let xs: Vec<Element> = h.iter().filter(|x| !ring.contains(&spec.primes[p], x)).cloned().collect();
            let ys: Vec<Element> = h.iter().filter(|y| !ring.contains(&spec.primes[q], y)).cloned().collect();
            match find_zero_product(ring, &xs, &ys) {
                Some((r, r_prime)) => {
                    last = Some(Witness::AnnPair {
                        r,
                        r_prime,
                        r_avoids: vec![spec.point(p)],
                        r_prime_avoids: vec![spec.point(q)],
                    })
                }
                None if ring.is_finite() => return Ok(Verdict::no(Authority::Search, Witness::Exhaustive)),
                None => unknown = true,
            }
        }
    }
    Ok(if unknown {
        Verdict::Unknown { bound: bound.0 }
    } else {
        Verdict::yes(Authority::Search, last.unwrap_or(Witness::Exhaustive))
    })
}

/// (Av): for graded I, J, J', h(R) ∩ I ⊆ J ∪ J' forces I ⊆ J or I ⊆ J'.
pub fn condition_av(ring: &GradedRing, bound: HeightBound) -> Result<Verdict> {
    if ring.is_trivially_graded() {
        return Ok(Verdict::yes(Authority::Poset, rule("trivial grading: a group inside a union of two subgroups lies in one")));
    }
    let Some(m) = ring.materialize() else {
        return Ok(Verdict::Unknown { bound: bound.0 });
    };
    let ideals = enumerate_graded_ideals(ring)?;
    let sets: Vec<BitSet> = ideals.iter().map(|i| ring.nf_to_explicit(&i.nf)).collect();
    let hmask = BitSet::from_indices(m.table.len(), m.table.homogeneous());
    for (a, i) in sets.iter().enumerate() {
        let hi = i.intersection(&hmask);
        for (b, j) in sets.iter().enumerate() {
            if i.is_subset(j) {
                continue;
            }
            for (c, j2) in sets.iter().enumerate() {
                if !i.is_subset(j2) && hi.is_subset(&j.union(j2)) {
                    return Ok(Verdict::no(
                        Authority::Search,
                        Witness::AvoidanceFailure {
                            i: ideals[a].label(),
                            j: ideals[b].label(),
                            j_prime: ideals[c].label(),
                        },
                    ));
                }
            }
        }
    }
    Ok(Verdict::yes(Authority::Search, Witness::Exhaustive))
}

/// (Cm): incomparable graded J, J' contain r ∈ J − J', r' ∈ J' − J of one degree.
pub fn condition_cm(ring: &GradedRing, bound: HeightBound) -> Result<Verdict> {
    if ring.is_trivially_graded() {
        return Ok(Verdict::yes(Authority::Poset, rule("trivial grading: every element has degree e")));
    }
    let Some(m) = ring.materialize() else {
        return Ok(Verdict::Unknown { bound: bound.0 });
    };
    let t = &m.table;
    let ideals = enumerate_graded_ideals(ring)?;
    let sets: Vec<BitSet> = ideals.iter().map(|i| ring.nf_to_explicit(&i.nf)).collect();
    let by_degree: BTreeMap<&Degree, BitSet> = {
        let mut map: BTreeMap<&Degree, BitSet> = BTreeMap::new();
        for x in t.homogeneous() {
            if let Some(d) = t.degree_of(x) {
                map.entry(d).or_insert_with(|| BitSet::new(t.len())).insert(x);
            }
        }
        map
    };
    for (a, j) in sets.iter().enumerate() {
        for (b, j2) in sets.iter().enumerate().skip(a + 1) {
            if j.is_subset(j2) || j2.is_subset(j) {
                continue;
            }
            let found = by_degree.values().any(|comp| {
                !j.intersection(comp).is_subset(j2) && !j2.intersection(comp).is_subset(j)
            });
            if !found {
                return Ok(Verdict::no(
                    Authority::Search,
                    Witness::IncomparableIdeals {
                        j: ideals[a].label(),
                        j_prime: ideals[b].label(),
                    },
                ));
            }
        }
    }
    Ok(Verdict::yes(Authority::Search, Witness::Exhaustive))
}

/// (PCm) for homogeneous primes. Under a torsion grading the witnesses are powers
/// a^n, b^m of generators, landing in degree e.
pub fn condition_pcm(ring: &GradedRing, bound: HeightBound) -> Result<Verdict> {
    let spec = ring.spectrum()?;
    let po = &spec.poset;
    let g = ring.grading();
    let h = hom(ring, bound);
    let mut unknown = false;
    let mut last = None;
    for p in 0..spec.len() {
        for q in p + 1..spec.len() {
            if po.le(p, q) || po.le(q, p) {
                continue;
            }
            let (qp, qq) = (&spec.primes[p], &spec.primes[q]);
            let a = qp.gens.iter().find(|x| !ring.contains(qq, x)).cloned();
            let b = qq.gens.iter().find(|x| !ring.contains(qp, x)).cloned();
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::TheoremViolation(format!(
                    "incomparable primes {} and {} without separating generators",
                    qp.label(),
                    qq.label()
                )));
            };
            let da = ring.is_homogeneous(&a).expect("generators are homogeneous");
            let db = ring.is_homogeneous(&b).expect("generators are homogeneous");
            let witness = |r: Element, r_prime: Element, degree: Degree| Witness::SameDegreePair {
                q: spec.point(p),
                q_prime: spec.point(q),
                degree,
                r,
                r_prime,
            };
            if da == db {
                last = Some(witness(a, b, da));
                continue;
            }
            if let (Some(n), Some(k)) = (g.order(&da), g.order(&db)) {
                let r = ring.pow(&a, n as u32);
                let r2 = ring.pow(&b, k as u32);
                last = Some(witness(r, r2, g.zero()));
                continue;
            }
            // same-degree search, powers of the generators included
            let mut xs: Vec<Element> = h.iter().filter(|x| ring.contains(qp, x) && !ring.contains(qq, x)).cloned().collect();
            let mut ys: Vec<Element> = h.iter().filter(|y| ring.contains(qq, y) && !ring.contains(qp, y)).cloned().collect();
            for k in 1..=bound.0.max(1) {
                xs.push(ring.pow(&a, k));
                ys.push(ring.pow(&b, k));
            }
            let mut degs: BTreeMap<Degree, Element> = BTreeMap::new();
            for x in xs {
                if let Some(d) = ring.is_homogeneous(&x) {
                    if !ring.is_zero(&x) {
                        degs.entry(d).or_insert(x);
                    }
                }
            }
            let hit = ys.into_iter().find_map(|y| {
                let d = ring.is_homogeneous(&y)?;
                (!ring.is_zero(&y)).then_some(())?;
                degs.get(&d).map(|x| (x.clone(), y, d))
            });
            match hit {
                Some((x, y, d)) => last = Some(witness(x, y, d)),
                None if ring.is_finite() => {
                    return Ok(Verdict::no(
                        Authority::Search,
                        Witness::NoSameDegreePair {
                            q: spec.point(p),
                            q_prime: spec.point(q),
                        },
                    ))
                }
                None => unknown = true,
            }
        }
    }
    Ok(if unknown {
        Verdict::Unknown { bound: bound.0 }
    } else {
        Verdict::yes(Authority::Search, last.unwrap_or(Witness::Exhaustive))
    })
}

/// Runs every pm+ criterion and cross-checks the equivalences.
pub fn pm_report(ring: &GradedRing, bound: HeightBound) -> Result<CriteriaReport> {
    let spec = ring.spectrum()?;
    let mut h = Harness::new(ring);
    h.push("definition", pm_on(&spec));
    h.push("cp", cp_criterion(ring)?);
    h.push("quotient", pm_quotient_criterion(ring)?);
    h.push("witness", pm_witness_criterion(ring, bound)?);
    h.push("av", condition_av(ring, bound)?);
    h.push("cm", condition_cm(ring, bound)?);
    h.push("pcm", condition_pcm(ring, bound)?);
    h.push("gelfand", gelfand_on(&spec));
    h.equivalent(&["definition", "cp", "quotient", "witness"]);
    h.equivalent(&["av", "cm"]);
    h.implies("definition", "gelfand");
    if ring.grading().is_torsion() && !h.find("pcm").is_some_and(|v| v.is_true()) {
        h.violation("torsion grading but (PCm) not established");
    }
    for (name, v) in h.criteria.clone() {
        if !super::recheck(ring, &v, bound)? {
            h.violation(format!("{name}: witness fails re-validation"));
        }
    }
    Ok(h.finish())
}

/// Non-nilpotent homogeneous elements within the bound, one per distinct D_G(t).
fn localizing_elements(ring: &GradedRing, spec: &SpectrumPoset, bound: HeightBound) -> Vec<(Element, BitSet)> {
    let mut seen = HashSet::new();
    let mut out = vec![];
    let mut cands = hom(ring, bound);
    // shortest printed form first, so each D_G(t) is represented by a simple t
    cands.sort_by_cached_key(|t| {
        let s = t.to_string();
        (s.starts_with('-'), s.len(), s)
    });
    for t in cands {
        if ring.is_nilpotent(&t) {
            continue;
        }
        let d = BitSet::from_indices(spec.len(), (0..spec.len()).filter(|&i| !ring.contains(&spec.primes[i], &t)));
        if seen.insert(d.clone()) {
            out.push((t, d));
        }
    }
    out
}

/// The localization chain: pm+ ⇒ R_S Gelfand ⇒ R_t Gelfand ⇒ D_G(t) normal, and back
/// to pm+ under (PCm). Per t, R_t Gelfand must match normality of D_G(t).
pub fn pm_localization_chain(ring: &GradedRing, bound: HeightBound) -> Result<CriteriaReport> {
    let spec = ring.spectrum()?;
    let mut h = Harness::new(ring);
    let pm = pm_on(&spec);
    let pcm = condition_pcm(ring, bound)?;
    let mut all_gelfand = Verdict::yes(Authority::Poset, Witness::Exhaustive);
    let mut all_normal = Verdict::yes(Authority::Poset, Witness::Exhaustive);
    for (t, d) in localizing_elements(ring, &spec, bound) {
        let pts = d.to_vec();
        let sub = spec.poset.restrict(&pts);
        let normal = normality_violation(&sub).is_none();
        let gel = match localize(ring, std::slice::from_ref(&t)) {
            Ok((rt, _)) => {
                if let Err(e) = check_localization_transfer(ring, std::slice::from_ref(&t)) {
                    h.violation(format!("localization at {t}: {e}"));
                }
                gelfand_on(&rt.spectrum()?)
            }
            Err(Error::UnsupportedConstruction(_)) => Verdict::Unknown { bound: bound.0 },
            Err(e) => return Err(e),
        };
        if !gel.is_unknown() && gel.is_true() != normal {
            h.violation(format!("R_{t} Gelfand is {} but D_G({t}) normal is {normal}", gel.is_true()));
        }
        let detail = format!("{} points, normal {normal}", pts.len());
        if gel.is_false() && all_gelfand.is_true() {
            all_gelfand = Verdict::no(Authority::Poset, Witness::Localization { t: t.clone(), detail: detail.clone() });
        } else if gel.is_unknown() && all_gelfand.is_true() {
            all_gelfand = gel.clone();
        }
        if !normal && all_normal.is_true() {
            all_normal = Verdict::no(Authority::Poset, Witness::Localization { t: t.clone(), detail });
        }
        h.push(format!("gelfand_at[{t}]"), gel);
    }
    h.push("pm_definition", pm.clone());
    h.push("pcm", pcm.clone());
    h.push("localizations_gelfand", all_gelfand.clone());
    h.push("d_t_normal", all_normal.clone());
    h.implies("pm_definition", "localizations_gelfand");
    if pcm.is_true() && all_normal.is_true() && pm.is_false() {
        if ring.is_finite() {
            h.violation("(PCm) holds and every D_G(t) is normal, yet the ring is not pm+");
        } else {
            // D_G(t) for t beyond the bound was not examined
            h.push("reverse_implication", Verdict::Unknown { bound: bound.0 });
        }
    }
    Ok(h.finish())
}

/// pm+ survives localization and quotients: seeded samples of both must stay pm+.
pub fn pm_stability_check(ring: &GradedRing, bound: HeightBound, seed: u64) -> Result<CriteriaReport> {
    let spec = ring.spectrum()?;
    let mut h = Harness::new(ring);
    let pm = pm_on(&spec);
    let holds = pm.is_true();
    h.push("pm_definition", pm);
    if !holds {
        return Ok(h.finish());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hs: Vec<Element> = hom(ring, bound).into_iter().filter(|t| !ring.is_nilpotent(t)).collect();
    for _ in 0..STABILITY_SAMPLES {
        let k = if hs.len() > 1 && rand::Rng::gen_bool(&mut rng, 0.5) { 2 } else { 1 };
        let s: Vec<Element> = hs.choose_multiple(&mut rng, k.min(hs.len())).cloned().collect();
        if s.is_empty() {
            break;
        }
        let names: Vec<String> = s.iter().map(|x| x.to_string()).collect();
        match localize(ring, &s) {
            Ok((rs, _)) => h.push(format!("localized_at[{}]", names.join(",")), pm_on(&rs.spectrum()?)),
            Err(Error::UnsupportedConstruction(_)) => {
                h.push(format!("localized_at[{}]", names.join(",")), Verdict::Unknown { bound: bound.0 })
            }
            Err(e) => return Err(e),
        }
    }
    let ideals: Vec<_> = if ring.is_finite() {
        enumerate_graded_ideals(ring)?.into_iter().filter(|i| ring.is_proper(i)).collect()
    } else {
        hom(ring, bound)
            .into_iter()
            .map(|x| ring.ideal(&[x]))
            .filter(|i| ring.is_proper(i))
            .collect()
    };
    for i in ideals.choose_multiple(&mut rng, STABILITY_SAMPLES) {
        let q = quotient(ring, i)?;
        h.push(format!("quotient_by[{}]", i.label()), pm_on(&q.spectrum()?));
    }
    for (name, v) in h.criteria.clone() {
        if v.is_false() {
            h.violation(format!("{name} is not pm+"));
        }
    }
    Ok(h.finish())
}
