//! Acceptance gate: ten criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use gelfand_core::criteria::*;
use gelfand_core::report::{corpus_files, load_ring, read_spec, verify_corpus};
use gelfand_core::spectrum::{g_spec, Route};
use gelfand_core::topology::{all_posets, is_normal, is_normal_brute, retraction_brute, retraction_to_max};
use gelfand_core::verdict::Witness;
use gelfand_core::{build_ring, ConstructionSpec, Element, GradedRing, HeightBound};
use serde_json::{json, Value};

const B: HeightBound = HeightBound(8);
const SEED: u64 = 11;

type Check = std::result::Result<String, String>;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus() -> Vec<(String, GradedRing)> {
    corpus_files(&corpus_dir())
        .expect("corpus directory")
        .into_iter()
        .map(|p| {
            let spec = read_spec(&p).expect("corpus file parses");
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, load_ring(&spec, B, SEED).expect("corpus ring builds"))
        })
        .collect()
}

fn ring(v: Value) -> GradedRing {
    let spec: ConstructionSpec = serde_json::from_value(v).expect("spec parses");
    build_ring(&spec).expect("ring builds")
}

fn el(r: &GradedRing, v: Value) -> Element {
    r.parse_element(&v).expect("element parses")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const GELFAND_GROUP: [&str; 6] = ["definition", "retract", "closed_locus", "normal", "re_gelfand", "comax"];

fn c1_gelfand_equivalence() -> Check {
    let start = Instant::now();
    let rings = corpus();
    let required = [
        "zmod_30", "f2_group_z2", "matrix_z4", "pid_z_2", "pid_z_2_3", "trivext_pid_2", "trivext_pid_2_3",
        "truncated_pid_2", "truncated_pid_2_3",
    ];
    for r in required {
        ensure(rings.iter().any(|(n, _)| n == r), || format!("corpus lacks {r}"))?;
    }
    let mut decided = 0;
    for (name, r) in &rings {
        let rep = gelfand_report(r, B).map_err(e2s)?;
        ensure(!rep.consistency.is_violation(), || format!("{name}: {:?}", rep.consistency))?;
        let vals: Vec<bool> = GELFAND_GROUP
            .iter()
            .filter_map(|c| rep.get(c).filter(|v| !v.is_unknown()).map(|v| v.is_true()))
            .collect();
        ensure(vals.windows(2).all(|w| w[0] == w[1]), || format!("{name}: criteria disagree"))?;
        decided += vals.len();
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{} rings, {decided} decided verdicts, 0 disagreements, {t:.2?}", rings.len()))
}

fn c2_negative_instance() -> Check {
    let r = ring(json!({"construct": "semilocal_pid", "ambient": "Z", "primes": [2, 3]}));
    let s = g_spec(&r).map_err(e2s)?;
    let id = |g: i64| s.find(&r, &r.ideal(&[el(&r, json!(g))])).unwrap();
    let (zero, two, three) = (s.find(&r, &r.zero_ideal()).unwrap(), id(2), id(3));

    let v = gelfand_by_definition(&r).map_err(e2s)?;
    match v.witness() {
        Some(Witness::PrimeBelowTwoMax { p, m, m_prime }) => ensure(
            p.index == zero && [m.index, m_prime.index] == [two, three],
            || format!("gelfand witness {p:?} {m:?} {m_prime:?}"),
        )?,
        other => return Err(format!("gelfand witness {other:?}")),
    }
    // membership re-check: 0 lies in both maximals, which are distinct
    let z = &s.primes[zero];
    ensure(
        r.ideal_le(z, &s.primes[two]) && r.ideal_le(z, &s.primes[three]) && !r.contains(&s.primes[two], &el(&r, json!(3))),
        || "poset witness fails membership".into(),
    )?;

    match gelfand_criterion_normal(&r).map_err(e2s)?.witness() {
        Some(Witness::NormalityViolation { p, q, common }) => {
            ensure([p.index, q.index] == [two, three] && common.index == zero, || format!("{p:?} {q:?} {common:?}"))?;
            let po = &s.poset;
            let meet = po.down_closure(po.up(two)).intersection(&po.down_closure(po.up(three)));
            ensure(meet.to_vec() == vec![zero], || format!("common part {:?}", meet.to_vec()))?;
        }
        other => return Err(format!("normality witness {other:?}")),
    }

    match gelfand_criterion_closed_locus(&r).map_err(e2s)?.witness() {
        Some(Witness::NotClosed { set_of, .. }) => ensure(set_of.index == two, || format!("closed locus at {set_of:?}"))?,
        other => return Err(format!("closed locus witness {other:?}")),
    }

    let four = el(&r, json!(4));
    let v = comax_witness(&r, &four, B).map_err(e2s)?;
    ensure(v.is_false(), || format!("comax at 4: {v:?}"))?;
    // direct arithmetic: 4 and 1 - 4 = -3 are nonunits of a domain
    let m3 = r.sub(&r.one(), &four);
    ensure(
        !r.is_unit(&four) && !r.is_unit(&m3) && m3 == el(&r, json!(-3)),
        || "unit check".into(),
    )?;

    ensure(
        retraction_to_max(&s.poset).is_none() && retraction_brute(&s.poset).is_none(),
        || "a retraction exists".into(),
    )?;
    ensure(gelfand_criterion_retract(&r).map_err(e2s)?.is_false(), || "retract criterion".into())?;
    Ok("witness (0, (2), (3)); normality common part {0}; closed locus fails at (2); comax fails at 4; no retraction".into())
}

fn c3_finite_antichain() -> Check {
    let mut n = 0;
    for (name, r) in corpus() {
        if !r.is_finite() {
            continue;
        }
        n += 1;
        let s = g_spec(&r).map_err(e2s)?;
        ensure(s.poset.is_discrete(), || format!("{name}: spectrum not discrete"))?;
        let g = gelfand_report(&r, B).map_err(e2s)?;
        for (c, v) in &g.criteria {
            ensure(v.is_true(), || format!("{name}: {c} is {v:?}"))?;
        }
        let p = pm_report(&r, B).map_err(e2s)?;
        for c in ["definition", "cp", "quotient", "witness", "gelfand"] {
            ensure(p.get(c).is_some_and(|v| v.is_true()), || format!("{name}: pm {c}"))?;
        }
    }
    Ok(format!("{n} finite rings: discrete spectra, every criterion true"))
}

fn c4_transfer_oracle() -> Check {
    let mut cases: Vec<GradedRing> = corpus()
        .into_iter()
        .map(|(_, r)| r)
        .filter(|r| !r.is_table())
        .collect();
    for n in [2u64, 3, 4, 6, 8, 9, 12] {
        let z = json!({"construct": "zmod", "n": n});
        cases.push(ring(json!({"construct": "trivial_extension", "base": z, "module": "free1"})));
        cases.push(ring(json!({"construct": "truncated_poly", "base": z, "n": 2})));
        cases.push(ring(json!({"construct": "group_algebra", "base": z, "group": {"cyclic": 2}})));
        cases.push(ring(json!({"construct": "matrix_example", "base": z})));
        cases.push(ring(json!({"construct": "product", "left": z, "right": {"construct": "zmod", "n": 2}})));
    }
    let mut both = 0;
    for r in cases.iter().filter(|r| r.cardinality().is_some_and(|c| c <= 64)) {
        let s = g_spec(r).map_err(e2s)?;
        ensure(s.route == Route::Both, || format!("{r}: route {:?}", s.route))?;
        // independent comparison: labeled posets from the two routes
        let m = r.materialize().unwrap();
        let mut enumerated = m.table.homogeneous_primes();
        enumerated.sort();
        let mut transferred: Vec<_> = s.primes.iter().map(|p| r.members(p).unwrap()).collect();
        transferred.sort();
        ensure(enumerated == transferred, || format!("{r}: prime sets differ"))?;
        both += 1;
    }
    Ok(format!("{both} presented rings over finite bases agree with enumeration"))
}

fn c5_topology_oracles() -> Check {
    let start = Instant::now();
    let mut total = 0;
    for n in 0..=7 {
        for p in all_posets(n) {
            total += 1;
            ensure(is_normal(&p) == is_normal_brute(&p), || format!("normality differs on {p:?}"))?;
            ensure(
                retraction_to_max(&p).is_some() == retraction_brute(&p).is_some(),
                || format!("retraction differs on {p:?}"),
            )?;
        }
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(120), || format!("took {t:?}"))?;
    Ok(format!("{total} posets up to isomorphism with at most 7 points, {t:.2?}"))
}

fn c6_pm_suite() -> Check {
    let mut pm_rings = 0;
    for (name, r) in corpus() {
        let rep = pm_report(&r, B).map_err(e2s)?;
        ensure(!rep.consistency.is_violation(), || format!("{name}: {:?}", rep.consistency))?;
        let d = rep.get("definition").unwrap().is_true();
        for c in ["cp", "quotient"] {
            let v = rep.get(c).unwrap();
            ensure(!v.is_unknown() && v.is_true() == d, || format!("{name}: {c} differs"))?;
        }
        if d {
            pm_rings += 1;
            ensure(gelfand_by_definition(&r).map_err(e2s)?.is_true(), || format!("{name}: pm+ but not Gelfand"))?;
            let st = pm_stability_check(&r, B, SEED).map_err(e2s)?;
            ensure(!st.consistency.is_violation(), || format!("{name}: stability {:?}", st.consistency))?;
        }
    }
    Ok(format!("definition = cp = quotient everywhere; {pm_rings} pm+ rings Gelfand and stable"))
}

fn c7_av_cm_pcm() -> Check {
    let (mut finite, mut torsion) = (0, 0);
    for (name, r) in corpus() {
        if r.is_finite() {
            finite += 1;
            let (av, cm) = (condition_av(&r, B).map_err(e2s)?, condition_cm(&r, B).map_err(e2s)?);
            ensure(!av.is_unknown() && !cm.is_unknown(), || format!("{name}: undecided"))?;
            ensure(av.is_true() == cm.is_true(), || format!("{name}: Av {av:?} Cm {cm:?}"))?;
        }
        if r.grading().is_torsion() {
            torsion += 1;
            let v = condition_pcm(&r, B).map_err(e2s)?;
            ensure(v.is_true(), || format!("{name}: PCm {v:?}"))?;
            ensure(recheck(&r, &v, B).map_err(e2s)?, || format!("{name}: PCm witness fails"))?;
        }
    }
    // a graded ring with incomparable primes, so the power witnesses are exercised
    let r = ring(json!({"construct": "trivial_extension", "base": {"construct": "zmod", "n": 6}, "module": "free1"}));
    let v = condition_pcm(&r, B).map_err(e2s)?;
    match v.witness() {
        Some(w @ Witness::SameDegreePair { r: a, r_prime: b, .. }) => {
            ensure(recheck(&r, &v, B).map_err(e2s)?, || format!("{w:?}"))?;
            let e = r.grading().zero();
            ensure(
                r.degree_of(a) == Some(e.clone()) && r.degree_of(b) == Some(e),
                || "witness outside degree e".into(),
            )?;
        }
        other => return Err(format!("PCm witness {other:?}")),
    }
    Ok(format!("Av = Cm on {finite} finite rings; PCm on {torsion} torsion-graded rings"))
}

fn c8_localization_chain() -> Check {
    for (name, r) in corpus() {
        let rep = pm_localization_chain(&r, B).map_err(e2s)?;
        ensure(!rep.consistency.is_violation(), || format!("{name}: {:?}", rep.consistency))?;
        if rep.get("pm_definition").unwrap().is_true() {
            ensure(!rep.get("localizations_gelfand").unwrap().is_false(), || format!("{name}: R_t not Gelfand"))?;
        }
    }
    let r = ring(json!({"construct": "semilocal_pid", "ambient": "Z", "primes": [2, 3]}));
    let rep = pm_localization_chain(&r, B).map_err(e2s)?;
    let at1 = rep.get("gelfand_at[1]").ok_or("no entry for t = 1")?;
    ensure(at1.is_false(), || format!("R_1: {at1:?}"))?;
    ensure(rep.get("d_t_normal").unwrap().is_false(), || "D(1) normal".into())?;
    ensure(rep.get("pm_definition").unwrap().is_false(), || "pm+".into())?;
    Ok("chain consistent on the corpus; on Z_(2,3) with t = 1, R_t is not Gelfand and D(t) is not normal".into())
}

fn c9_urysohn() -> Check {
    let r = ring(json!({"construct": "zmod", "n": 6}));
    let (two, three) = (r.ideal(&[el(&r, json!(2))]), r.ideal(&[el(&r, json!(3))]));
    let v = urysohn_witness(&r, &two, &three, B).map_err(e2s)?;
    let s = g_spec(&r).map_err(e2s)?;
    let four = el(&r, json!(4));
    match v.witness() {
        Some(Witness::UrysohnFn { r: x, .. }) => ensure(*x == four, || format!("witness {x}"))?,
        other => return Err(format!("{other:?}")),
    }
    let p2 = s.find(&r, &two).unwrap();
    let p3 = s.find(&r, &three).unwrap();
    match (eval_regular(&r, &four, p2, B).map_err(e2s)?, eval_regular(&r, &four, p3, B).map_err(e2s)?) {
        (RegularValue::Zero { a }, RegularValue::One { a: b }) => {
            // 4a = 0 with a outside (2); 3b = 0 with b outside (3)
            ensure(r.is_zero(&r.mul(&four, &a)) && !r.contains(&two, &a), || format!("zero witness {a}"))?;
            let three_el = r.sub(&four, &r.one());
            ensure(r.is_zero(&r.mul(&three_el, &b)) && !r.contains(&three, &b), || format!("one witness {b}"))?;
            Ok(format!("r = 4: 4*{a} = 0 at (2), (4 - 1)*{b} = 0 at (3)"))
        }
        other => Err(format!("{other:?}")),
    }
}

fn c10_determinism() -> Check {
    let a = serde_json::to_string(&verify_corpus(&corpus_dir(), B, SEED).map_err(e2s)?).unwrap();
    let b = serde_json::to_string(&verify_corpus(&corpus_dir(), B, SEED).map_err(e2s)?).unwrap();
    ensure(a == b, || "reports differ".into())?;
    let run: Value = serde_json::from_str(&a).unwrap();
    ensure(run["pass"] == json!(true), || format!("violations: {}", run["violations"]))?;
    Ok(format!("two runs, identical {}-byte reports", a.len()))
}

fn main() {
    let checks: [(&str, fn() -> Check); 10] = [
        ("Gelfand equivalence suite", c1_gelfand_equivalence),
        ("negative instance fidelity", c2_negative_instance),
        ("finite-layer antichain", c3_finite_antichain),
        ("transfer-rule oracle", c4_transfer_oracle),
        ("topology shortcut oracles", c5_topology_oracles),
        ("pm+ suite", c6_pm_suite),
        ("(Av) = (Cm) and torsion (PCm)", c7_av_cm_pcm),
        ("localization chain", c8_localization_chain),
        ("Urysohn concrete case", c9_urysohn),
        ("determinism", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(msg) => println!("[PASS] {:>2}. {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
