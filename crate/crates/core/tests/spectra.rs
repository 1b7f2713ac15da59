use gelfand_core::spectrum::{
    check_localization_transfer, check_quotient_transfer, enumerate_graded_ideals, find_prime_avoiding,
    g_max, g_spec, is_homogeneous_prime, maximal_over, Route,
};
use gelfand_core::{build_ring, ConstructionSpec, Element, Error, GradedRing, HeightBound};
use serde_json::{json, Value};

fn ring(v: Value) -> GradedRing {
    let spec: ConstructionSpec = serde_json::from_value(v).expect("spec parses");
    build_ring(&spec).expect("ring builds")
}

fn el(r: &GradedRing, v: Value) -> Element {
    r.parse_element(&v).expect("element parses")
}

fn labels(r: &GradedRing) -> Vec<String> {
    let s = g_spec(r).unwrap();
    (0..s.len()).map(|i| s.label(i)).collect()
}

fn zsl23() -> GradedRing {
    ring(json!({"construct": "semilocal_pid", "ambient": "Z", "primes": [2, 3]}))
}

#[test]
fn z6_ideals_primes_and_maximals() {
    let r = ring(json!({"construct": "zmod", "n": 6}));
    let ideals = enumerate_graded_ideals(&r).unwrap();
    let sizes: Vec<usize> = ideals.iter().map(|i| r.members(i).unwrap().count()).collect();
    // {0}, (3) = {0,3}, (2) = {0,2,4}, R
    assert_eq!(sizes, vec![1, 2, 3, 6]);
    let two = r.ideal(&[el(&r, json!(2))]);
    assert_eq!(r.members(&two).unwrap().count(), 3);
    assert!(is_homogeneous_prime(&r, &two).unwrap().is_true());
    assert!(is_homogeneous_prime(&r, &r.zero_ideal()).unwrap().is_false());
    let s = g_spec(&r).unwrap();
    assert_eq!(s.len(), 2);
    assert!(s.poset.is_discrete());
    assert_eq!(g_max(&r).unwrap().len(), 2);
    assert_eq!(s.route, Route::Both);
}

#[test]
fn f2_group_algebra_has_two_graded_ideals() {
    let r = ring(json!({"construct": "group_algebra", "base": {"construct": "zmod", "n": 2}, "group": {"cyclic": 2}}));
    assert_eq!(enumerate_graded_ideals(&r).unwrap().len(), 2);
    assert_eq!(labels(&r), vec!["(0)"]);
    assert!(is_homogeneous_prime(&r, &r.zero_ideal()).unwrap().is_true());
}

#[test]
fn zero_ring_has_empty_spectrum() {
    let r = ring(json!({"construct": "zmod", "n": 1}));
    assert_eq!(enumerate_graded_ideals(&r).unwrap().len(), 1);
    assert!(g_spec(&r).unwrap().is_empty());
}

#[test]
fn semilocal_pid_spectrum_is_a_vee() {
    let r = zsl23();
    let s = g_spec(&r).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(s.route, Route::Transfer);
    let zero = s.find(&r, &r.zero_ideal()).unwrap();
    assert_eq!(s.poset.up(zero).count(), 3);
    assert_eq!(s.maximal.len(), 2);
    // (12) has valuations (2, 1)
    let twelve = r.ideal(&[el(&r, json!(12))]);
    let four_three = r.ideal(&[el(&r, json!(4)), el(&r, json!(3))]);
    assert!(!r.ideal_eq(&twelve, &four_three));
    assert!(r.ideal_eq(&twelve, &r.ideal(&[el(&r, json!("12/5"))])));
}

#[test]
fn matrix_example_over_z4_has_one_point() {
    let r = ring(json!({"construct": "matrix_example", "base": {"construct": "zmod", "n": 4}}));
    let s = g_spec(&r).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s.route, Route::Both);
}

#[test]
fn prime_avoidance_examples() {
    let r = ring(json!({"construct": "zmod", "n": 6}));
    let b = HeightBound::default();
    let two = r.ideal(&[el(&r, json!(2))]);
    let three = r.ideal(&[el(&r, json!(3))]);
    let s = g_spec(&r).unwrap();
    let q = find_prime_avoiding(&r, &r.zero_ideal(), &[two.clone()], b).unwrap();
    assert!(r.ideal_eq(&s.primes[q], &two));
    let q = find_prime_avoiding(&r, &r.zero_ideal(), &[two.clone(), three.clone()], b).unwrap();
    assert!(r.ideal_eq(&s.primes[q], &two) || r.ideal_eq(&s.primes[q], &three));
    let q = find_prime_avoiding(&r, &three, &[three.clone()], b).unwrap();
    assert!(r.ideal_eq(&s.primes[q], &three));
    let m = maximal_over(&r, s.find(&r, &two).unwrap(), &two, b).unwrap();
    assert!(r.ideal_eq(&s.primes[m], &two));
}

#[test]
fn maximal_over_in_semilocal_pid() {
    let r = zsl23();
    let b = HeightBound::default();
    let s = g_spec(&r).unwrap();
    let zero = s.find(&r, &r.zero_ideal()).unwrap();
    let four = r.ideal(&[el(&r, json!(4))]);
    let six = r.ideal(&[el(&r, json!(6))]);
    let two = r.ideal(&[el(&r, json!(2))]);
    let three = s.find(&r, &r.ideal(&[el(&r, json!(3))])).unwrap();
    // the zero prime has no nonzero homogeneous elements, so the precondition is vacuous
    let m = maximal_over(&r, zero, &six, b).unwrap();
    assert!(r.ideal_eq(&s.primes[m], &two));
    let m = maximal_over(&r, zero, &four, b).unwrap();
    assert!(r.ideal_eq(&s.primes[m], &two));
    // witness: a homogeneous element of (3) outside (2), the only maximal over (4)
    match maximal_over(&r, three, &four, b) {
        Err(Error::PreconditionFails(w)) => {
            assert!(r.contains(&s.primes[three], &w) && !r.contains(&two, &w));
        }
        other => panic!("expected a precondition failure, got {other:?}"),
    }
}

#[test]
fn quotient_and_localization_transfer() {
    let r = ring(json!({"construct": "zmod", "n": 12}));
    check_quotient_transfer(&r, &r.ideal(&[el(&r, json!(2))])).unwrap();
    check_localization_transfer(&r, &[el(&r, json!(3))]).unwrap();
    let p = zsl23();
    check_quotient_transfer(&p, &p.ideal(&[el(&p, json!(4))])).unwrap();
    check_localization_transfer(&p, &[el(&p, json!(2))]).unwrap();
}

#[test]
fn transfer_agrees_with_enumeration_on_finite_constructions() {
    for v in [
        json!({"construct": "trivial_extension", "base": {"construct": "zmod", "n": 4}, "module": "free1"}),
        json!({"construct": "truncated_poly", "base": {"construct": "zmod", "n": 6}, "n": 2}),
        json!({"construct": "group_algebra", "base": {"construct": "zmod", "n": 3}, "group": {"cyclic": 2}}),
        json!({"construct": "product", "left": {"construct": "zmod", "n": 4}, "right": {"construct": "zmod", "n": 3}}),
        json!({"construct": "matrix_example", "base": {"construct": "zmod", "n": 6}}),
    ] {
        let r = ring(v);
        let s = g_spec(&r).unwrap();
        assert_eq!(s.route, Route::Both, "{r}");
    }
}
