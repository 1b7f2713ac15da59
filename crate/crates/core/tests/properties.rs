use gelfand_core::criteria::*;
use gelfand_core::spectrum::{check_localization_transfer, find_prime_avoiding, g_spec};
use gelfand_core::topology::{is_normal, is_normal_brute, is_retraction, retraction_brute, retraction_to_max, Poset};
use gelfand_core::{build_ring, ConstructionSpec, Element, Error, GradedRing, HeightBound};
use proptest::prelude::*;
use serde_json::{json, Value};

const B: HeightBound = HeightBound(6);
const SMALL_PRIMES: [i64; 5] = [2, 3, 5, 7, 11];

fn ring(v: Value) -> GradedRing {
    let spec: ConstructionSpec = serde_json::from_value(v).expect("spec parses");
    build_ring(&spec).expect("ring builds")
}

fn zmod(n: u64) -> GradedRing {
    ring(json!({"construct": "zmod", "n": n}))
}

fn el(r: &GradedRing, v: Value) -> Element {
    r.parse_element(&v).expect("element parses")
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn valuation(mut k: i64, p: i64) -> u32 {
    let mut v = 0;
    while k != 0 && k % p == 0 {
        k /= p;
        v += 1;
    }
    v
}

/// Random order on n points: a random DAG on 0..n (edges go upward), closed transitively.
fn arb_poset() -> impl Strategy<Value = Poset> {
    (1usize..=7).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut le = vec![vec![false; n]; n];
            for i in 0..n {
                le[i][i] = true;
                for j in i + 1..n {
                    le[i][j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if le[i][k] && le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
            Poset::from_relation(n, |i, j| le[i][j]).expect("closure is a partial order")
        })
    })
}

fn arb_prime_subset() -> impl Strategy<Value = Vec<i64>> {
    proptest::sample::subsequence(SMALL_PRIMES.to_vec(), 1..=3)
}

fn arb_small_construction() -> impl Strategy<Value = Value> {
    let base = (2u64..=8).prop_map(|n| json!({"construct": "zmod", "n": n}));
    (base, 0usize..5, 2u64..=4).prop_map(|(b, kind, m)| match kind {
        0 => json!({"construct": "trivial_extension", "base": b, "module": "free1"}),
        1 => json!({"construct": "truncated_poly", "base": b, "n": 2}),
        2 => json!({"construct": "group_algebra", "base": b, "group": {"cyclic": 2}}),
        3 => json!({"construct": "matrix_example", "base": b}),
        _ => json!({"construct": "product", "left": b, "right": {"construct": "zmod", "n": m}}),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poset_rules_match_brute_force(p in arb_poset()) {
        prop_assert_eq!(is_normal(&p), is_normal_brute(&p));
        let fast = retraction_to_max(&p);
        prop_assert_eq!(fast.is_some(), retraction_brute(&p).is_some());
        if let Some(f) = fast {
            prop_assert!(is_retraction(&p, &f));
        }
    }

    #[test]
    fn zmod_spectrum_is_discrete_on_prime_divisors(n in 2u64..=240) {
        let r = zmod(n);
        let s = g_spec(&r).unwrap();
        prop_assert!(s.poset.is_discrete());
        prop_assert_eq!(s.len(), prime_factors(n).len());
        for (p, _) in prime_factors(n) {
            prop_assert!(s.find(&r, &r.ideal(&[el(&r, json!(p))])).is_some());
        }
    }

    #[test]
    fn zmod_principal_ideal_size(n in 2u64..=240, d in 0u64..=240) {
        let r = zmod(n);
        let i = r.ideal(&[el(&r, json!(d % n))]);
        prop_assert_eq!(r.members(&i).unwrap().count() as u64, n / gcd(d, n));
    }

    #[test]
    fn zmod_product_spectrum_size(m in 2u64..=30, n in 2u64..=30) {
        let r = ring(json!({"construct": "product",
            "left": {"construct": "zmod", "n": m}, "right": {"construct": "zmod", "n": n}}));
        let s = g_spec(&r).unwrap();
        prop_assert_eq!(s.len(), prime_factors(m).len() + prime_factors(n).len());
        prop_assert!(gelfand_by_definition(&r).unwrap().is_true());
    }

    #[test]
    fn semilocal_pid_spectrum_and_criteria(ps in arb_prime_subset()) {
        let r = ring(json!({"construct": "semilocal_pid", "ambient": "Z", "primes": ps}));
        let s = g_spec(&r).unwrap();
        // (0) below each maximal (p)
        prop_assert_eq!(s.len(), ps.len() + 1);
        prop_assert_eq!(s.maximal.len(), ps.len());
        let expected = ps.len() == 1;
        prop_assert_eq!(gelfand_by_definition(&r).unwrap().is_true(), expected);
        prop_assert_eq!(pm_by_definition(&r).unwrap().is_true(), expected);
    }

    #[test]
    fn semilocal_pid_units(ps in arb_prime_subset(), k in -500i64..=500) {
        prop_assume!(k != 0);
        let r = ring(json!({"construct": "semilocal_pid", "ambient": "Z", "primes": ps}));
        let unit = ps.iter().all(|p| k % p != 0);
        prop_assert_eq!(r.is_unit(&el(&r, json!(k))), unit);
    }

    #[test]
    fn semilocal_pid_ideal_normal_form(ps in arb_prime_subset(), a in 1i64..=400, b in 1i64..=400) {
        let r = ring(json!({"construct": "semilocal_pid", "ambient": "Z", "primes": ps}));
        let g: i64 = ps.iter().map(|&p| p.pow(valuation(a, p).min(valuation(b, p)))).product();
        let two = r.ideal(&[el(&r, json!(a)), el(&r, json!(b))]);
        prop_assert!(r.ideal_eq(&two, &r.ideal(&[el(&r, json!(g))])));
    }

    #[test]
    fn prime_avoidance_postconditions(n in 2u64..=120, d in 0u64..=120, mask in 1u32..8) {
        let r = zmod(n);
        let s = g_spec(&r).unwrap();
        let family: Vec<_> = (0..s.len()).filter(|i| mask & (1 << (i % 3)) != 0).map(|i| s.primes[i].clone()).collect();
        prop_assume!(!family.is_empty());
        let i = r.ideal(&[el(&r, json!(d % n))]);
        let union = family.iter().fold(r.members(&r.zero_ideal()).unwrap(), |acc, f| acc.union(&r.members(f).unwrap()));
        let covered = r.members(&i).unwrap().is_subset(&union);
        match find_prime_avoiding(&r, &i, &family, B) {
            Ok(q) => {
                prop_assert!(covered);
                let qm = r.members(&s.primes[q]).unwrap();
                prop_assert!(r.members(&i).unwrap().is_subset(&qm));
                prop_assert!(qm.is_subset(&union));
            }
            Err(Error::HypothesisFails { .. }) => prop_assert!(!covered),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn regular_values_match_local_arithmetic(n in 2u64..=120, x in 0u64..=120) {
        let r = zmod(n);
        let s = g_spec(&r).unwrap();
        let x = x % n;
        let xe = el(&r, json!(x));
        for (p, e) in prime_factors(n) {
            let q = p.pow(e);
            let pid = s.find(&r, &r.ideal(&[el(&r, json!(p))])).unwrap();
            // the germ at (p) is the image in Z/p^e
            let zero = x % q == 0;
            let one = (x + q - 1) % q == 0;
            match eval_regular(&r, &xe, pid, B).unwrap() {
                RegularValue::Zero { .. } => prop_assert!(zero),
                RegularValue::One { .. } => prop_assert!(one),
                RegularValue::Other => prop_assert!(!zero && !one),
                RegularValue::Unknown { .. } => prop_assert!(false, "finite ring left undecided"),
            }
        }
    }

    #[test]
    fn constructions_satisfy_axioms_and_witnesses_recheck(spec in arb_small_construction()) {
        let r = ring(spec);
        r.check_axioms(B, 3).unwrap();
        for rep in [gelfand_report(&r, B).unwrap(), pm_report(&r, B).unwrap()] {
            prop_assert!(!rep.consistency.is_violation(), "{:?}", rep.consistency);
            for (name, v) in &rep.criteria {
                prop_assert!(recheck(&r, v, B).unwrap(), "{} witness fails: {:?}", name, v);
            }
        }
    }

    #[test]
    fn localization_transfer_holds(spec in arb_small_construction(), picks in proptest::collection::vec(0usize..64, 1..3)) {
        let r = ring(spec);
        let hom = r.homogeneous_elements(B);
        let s: Vec<Element> = picks.iter().map(|i| hom[i % hom.len()].clone()).collect();
        prop_assert!(check_localization_transfer(&r, &s).is_ok());
    }
}
