use gelfand_core::criteria::*;
use gelfand_core::spectrum::g_spec;
use gelfand_core::verdict::Witness;
use gelfand_core::{build_ring, ConstructionSpec, Element, Error, GradedRing, HeightBound};
use serde_json::{json, Value};

const B: HeightBound = HeightBound(8);

fn ring(v: Value) -> GradedRing {
    let spec: ConstructionSpec = serde_json::from_value(v).expect("spec parses");
    build_ring(&spec).expect("ring builds")
}

fn el(r: &GradedRing, v: Value) -> Element {
    r.parse_element(&v).expect("element parses")
}

fn z6() -> GradedRing {
    ring(json!({"construct": "zmod", "n": 6}))
}

fn zsl23() -> GradedRing {
    ring(json!({"construct": "semilocal_pid", "ambient": "Z", "primes": [2, 3]}))
}

fn zsl2() -> GradedRing {
    ring(json!({"construct": "semilocal_pid", "ambient": "Z", "primes": [2]}))
}

fn prime(r: &GradedRing, g: i64) -> usize {
    let s = g_spec(r).unwrap();
    s.find(r, &r.ideal(&[el(r, json!(g))])).expect("prime present")
}

#[test]
fn z6_gelfand_criteria_all_true() {
    let r = z6();
    let rep = gelfand_report(&r, B).unwrap();
    assert_eq!(rep.consistency, Consistency::Consistent, "{rep:?}");
    for (name, v) in &rep.criteria {
        assert!(v.is_true(), "{name}: {v:?}");
    }
}

#[test]
fn z6_separation_pair_is_two_three() {
    let r = z6();
    let v = separation_witness(&r, prime(&r, 2), prime(&r, 3), B).unwrap();
    match v.witness() {
        Some(Witness::AnnPair { r: x, r_prime: y, .. }) => {
            // x outside (3), y outside (2), xy = 0
            assert!(r.is_zero(&r.mul(x, y)));
            assert!(!r.contains(&r.ideal(&[el(&r, json!(3))]), x));
            assert!(!r.contains(&r.ideal(&[el(&r, json!(2))]), y));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn separation_errors() {
    let r = z6();
    let two = prime(&r, 2);
    assert_eq!(separation_witness(&r, two, two, B), Err(Error::Equal));
    let t = ring(json!({"construct": "trivial_extension", "base": {"construct": "zmod", "n": 4}, "module": "free1"}));
    let s = g_spec(&t).unwrap();
    assert_eq!(s.maximal.len(), 1);
    assert_eq!(separation_witness(&t, s.maximal[0], s.maximal[0], B), Err(Error::Equal));
    let p = zsl23();
    let ps = g_spec(&p).unwrap();
    let zero = ps.find(&p, &p.zero_ideal()).unwrap();
    assert_eq!(separation_witness(&p, zero, ps.maximal[0], B), Err(Error::NotMaximal));
}

#[test]
fn semilocal_pid_fails_every_gelfand_criterion() {
    let r = zsl23();
    assert!(gelfand_by_definition(&r).unwrap().is_false());
    assert!(gelfand_criterion_retract(&r).unwrap().is_false());
    assert!(gelfand_criterion_normal(&r).unwrap().is_false());
    match gelfand_criterion_closed_locus(&r).unwrap().witness() {
        Some(Witness::NotClosed { set_of, inside, missing }) => {
            assert_eq!(set_of.label, "(2)");
            assert_eq!(inside.label, "(0)");
            assert_eq!(missing.label, "(3)");
        }
        other => panic!("{other:?}"),
    }
    let v = separation_witness(&r, prime(&r, 2), prime(&r, 3), B).unwrap();
    assert!(v.is_false());
    let four = el(&r, json!(4));
    assert!(comax_witness(&r, &four, B).unwrap().is_false());
    let rep = gelfand_report(&r, B).unwrap();
    assert!(!rep.consistency.is_violation(), "{rep:?}");
    assert!(rep.get("comax").unwrap().is_false());
    assert!(rep.get("urysohn").unwrap().is_unknown());
    assert!(rep.get("hausdorff_max").unwrap().is_true());
}

#[test]
fn trivial_extension_over_semilocal_pid_is_not_gelfand() {
    let r = ring(json!({"construct": "trivial_extension",
        "base": {"construct": "semilocal_pid", "ambient": "Z", "primes": [2, 3]}, "module": "free1"}));
    assert!(gelfand_by_definition(&r).unwrap().is_false());
    assert!(re_gelfand(&r).unwrap().is_false());
    assert!(pm_witness_criterion(&r, B).unwrap().is_false());
    let rep = gelfand_report(&r, B).unwrap();
    assert!(!rep.consistency.is_violation(), "{rep:?}");
}

#[test]
fn re_gelfand_examples() {
    let m = ring(json!({"construct": "matrix_example", "base": {"construct": "zmod", "n": 4}}));
    assert!(re_gelfand(&m).unwrap().is_true());
    let f = ring(json!({"construct": "group_algebra", "base": {"construct": "zmod", "n": 2}, "group": {"cyclic": 2}}));
    assert!(re_gelfand(&f).unwrap().is_true());
}

#[test]
fn regular_function_values_on_z6() {
    let r = z6();
    let four = el(&r, json!(4));
    assert!(matches!(eval_regular(&r, &four, prime(&r, 2), B).unwrap(), RegularValue::Zero { .. }));
    assert!(matches!(eval_regular(&r, &four, prime(&r, 3), B).unwrap(), RegularValue::One { .. }));
    assert!(matches!(eval_regular(&r, &r.zero(), prime(&r, 3), B).unwrap(), RegularValue::Zero { .. }));
}

#[test]
fn urysohn_on_z6_finds_four() {
    let r = z6();
    let f = r.ideal(&[el(&r, json!(2))]);
    let f2 = r.ideal(&[el(&r, json!(3))]);
    match urysohn_witness(&r, &f, &f2, B).unwrap().witness() {
        Some(Witness::UrysohnFn { r: x, .. }) => assert_eq!(*x, el(&r, json!(4))),
        other => panic!("{other:?}"),
    }
    assert_eq!(urysohn_witness(&r, &f, &f, B), Err(Error::NotDisjoint));
    // an empty closed set is separated by 1
    assert!(urysohn_witness(&r, &r.whole_ideal(), &f, B).unwrap().is_true());
}

#[test]
fn comax_examples() {
    let r = z6();
    let v = comax_witness(&r, &el(&r, json!(3)), B).unwrap();
    assert!(v.is_true());
    assert!(recheck(&r, &v, B).unwrap());
    let v = comax_witness(&r, &r.one(), B).unwrap();
    assert!(matches!(v.witness(), Some(Witness::ComaxPair { c, .. }) if r.is_zero(c)));
    let g = ring(json!({"construct": "group_algebra", "base": {"construct": "zmod", "n": 3}, "group": {"cyclic": 2}}));
    let gen = el(&g, json!([0, 1]));
    assert_eq!(comax_witness(&g, &gen, B), Err(Error::NotDegreeE(gen)));
}

#[test]
fn zero_ring_is_vacuously_everything() {
    let r = ring(json!({"construct": "zmod", "n": 1}));
    let rep = gelfand_report(&r, B).unwrap();
    assert_eq!(rep.consistency, Consistency::Consistent);
    assert!(rep.criteria.iter().all(|(_, v)| v.is_true()));
    let rep = pm_report(&r, B).unwrap();
    assert!(rep.criteria.iter().all(|(_, v)| v.is_true()), "{rep:?}");
}

#[test]
fn pm_examples() {
    let p = zsl23();
    assert!(pm_by_definition(&p).unwrap().is_false());
    assert!(cp_criterion(&p).unwrap().is_false());
    assert!(pm_quotient_criterion(&p).unwrap().is_false());
    assert!(pm_witness_criterion(&p, B).unwrap().is_false());
    let c = zsl2();
    let rep = pm_report(&c, B).unwrap();
    assert_eq!(rep.consistency, Consistency::Consistent, "{rep:?}");
    assert!(rep.get("definition").unwrap().is_true());
    let z = z6();
    assert!(pm_witness_criterion(&z, B).unwrap().is_true());
    assert!(condition_av(&z, B).unwrap().is_true());
    assert!(condition_cm(&z, B).unwrap().is_true());
}

#[test]
fn pcm_holds_under_torsion_gradings() {
    for v in [
        json!({"construct": "trivial_extension", "base": {"construct": "zmod", "n": 6}, "module": "free1"}),
        json!({"construct": "group_algebra", "base": {"construct": "zmod", "n": 6}, "group": {"cyclic": 2}}),
    ] {
        let r = ring(v);
        let v = condition_pcm(&r, B).unwrap();
        assert!(v.is_true(), "{v:?}");
        assert!(recheck(&r, &v, B).unwrap());
    }
}

#[test]
fn localization_chain_examples() {
    let p = zsl23();
    let rep = pm_localization_chain(&p, B).unwrap();
    assert!(!rep.consistency.is_violation(), "{rep:?}");
    assert!(rep.get("gelfand_at[1]").unwrap().is_false());
    assert!(rep.get("d_t_normal").unwrap().is_false());
    let c = zsl2();
    let rep = pm_localization_chain(&c, B).unwrap();
    assert!(!rep.consistency.is_violation(), "{rep:?}");
    assert!(rep.get("localizations_gelfand").unwrap().is_true());
}

#[test]
fn stability_examples() {
    let c = zsl2();
    let rep = pm_stability_check(&c, B, 7).unwrap();
    assert_eq!(rep.consistency, Consistency::Consistent, "{rep:?}");
    assert!(rep.criteria.len() > 1);
    let z = ring(json!({"construct": "zmod", "n": 12}));
    let rep = pm_stability_check(&z, B, 7).unwrap();
    assert_eq!(rep.consistency, Consistency::Consistent, "{rep:?}");
}

