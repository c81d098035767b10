use std::collections::BTreeSet;

use closedgeo::algebra::{AlgebraPresentation, FactorKind, MonogenicFactor};
use closedgeo::catalog::*;
use closedgeo::{Characteristic, Error, Prime};
use proptest::prelude::*;

fn bounds() -> CatalogBounds {
    CatalogBounds::default()
}

fn get(name: &str) -> SpaceRecord {
    lookup(name, bounds()).unwrap()
}

fn fired_at(v: &Verdict, rule: Rule) -> BTreeSet<u64> {
    v.justification.iter().filter(|s| s.rule == rule).filter_map(|s| s.prime).collect()
}

#[test]
fn sphere_bundles_with_nonzero_euler_class() {
    for n in 2..=6u32 {
        for e in [2i64, 3, 6, 10, -15, 30030] {
            let v = verdict(&get(&format!("Q({},{e})", 2 * n))).unwrap();
            assert_eq!(v.conclusion, Conclusion::InfinitelyManyGeodesics, "Q({},{e})", 2 * n);
            let dividing: BTreeSet<u64> = Prime::up_to(13)
                .into_iter()
                .map(Prime::get)
                .filter(|p| e.unsigned_abs() % p == 0)
                .collect();
            assert_eq!(fired_at(&v, Rule::R4), dividing);
            assert_eq!(fired_at(&v, Rule::R3), dividing);
            assert!(!v.rules_fired().contains(&Rule::R2));
            assert!(v.chain_is_complete());
        }
    }
}

#[test]
fn unit_euler_class_is_an_integral_homology_sphere() {
    // No prime divides e = 1, so every route is closed.
    for e in [1, -1] {
        let v = verdict(&get(&format!("Q(6,{e})"))).unwrap();
        assert_eq!(v.conclusion, Conclusion::Unknown);
        assert_eq!(v.unknown_reason, Some(UnknownReason::MathematicallyOpen));
    }
}

#[test]
fn trivial_euler_class_goes_through_the_rational_route() {
    let v = verdict(&get("Q(8,0)")).unwrap();
    assert_eq!(v.conclusion, Conclusion::InfinitelyManyGeodesics);
    assert_eq!(v.justification[0].rule, Rule::R2);
    assert_eq!(v.justification[0].citation, Citation::SullivanViguePoirrier);
    assert_eq!(v.justification[1].citation, Citation::GromollMeyer);
}

#[test]
fn stiefel_manifolds() {
    let r = get("V2(R^5)");
    assert_eq!(r.dimension, Some(7));
    assert!(r.notes[0].contains("Euler class 2"));
    let q = get("Q(4,2)");
    assert_eq!(r.mod_p, q.mod_p);
    for n in 2..=6 {
        let v = verdict(&get(&format!("V2(R^{})", 2 * n + 1))).unwrap();
        assert_eq!(v.conclusion, Conclusion::InfinitelyManyGeodesics);
        assert_eq!(fired_at(&v, Rule::R4), BTreeSet::from([2]));
    }
}

#[test]
fn oriented_grassmannians() {
    let r = get("G2+(R^5)");
    assert_eq!(r.dimension, Some(6));
    let odd = r.mod_p[&Prime::new(3).unwrap()].cohomology.clone().unwrap();
    assert_eq!(odd.factors(), &[MonogenicFactor::truncated("x", 2, 4)]);
    let lp = r.mod_p[&Prime::TWO].loop_homology.clone().unwrap();
    let kinds: Vec<(u32, FactorKind)> = lp.factors().iter().map(|f| (f.degree, f.kind)).collect();
    assert_eq!(
        kinds,
        vec![(1, FactorKind::Exterior), (2, FactorKind::Polynomial), (3, FactorKind::Polynomial)]
    );
    for n in 2..=6 {
        let v = verdict(&get(&format!("G2+(R^{})", 2 * n + 1))).unwrap();
        assert_eq!(v.conclusion, Conclusion::InfinitelyManyGeodesics);
        assert_eq!(fired_at(&v, Rule::R3), BTreeSet::from([2]));
        assert_eq!(fired_at(&v, Rule::R4), BTreeSet::from([2]));
    }
}

#[test]
fn spheres_and_projective_spaces_stay_unknown() {
    for n in 2..=10 {
        for name in [format!("S^{n}"), format!("CP^{n}")] {
            let v = verdict(&get(&name)).unwrap();
            assert_eq!(v.conclusion, Conclusion::Unknown, "{name}");
            assert_eq!(v.unknown_reason, Some(UnknownReason::MathematicallyOpen));
            assert_eq!(v.rules_fired(), BTreeSet::from([Rule::R5]));
        }
    }
}

#[test]
fn homogeneous_stubs_report_missing_data() {
    let stubs = ["SU(2)/SO(3)", "Sp(2)/SU(2)", "G2/K-1", "G2/K-2", "G2/K-3", "G2/K-4", "G2/K-5"];
    for name in stubs {
        let r = get(name);
        assert!(r.homogeneous);
        let v = verdict(&r).unwrap();
        assert_eq!(v.unknown_reason, Some(UnknownReason::DataMissing), "{name}");
    }
    assert!(get("SU(2)/SO(3)").notes[0].contains("SU(3)/SO(3)"));
}

#[test]
fn supplied_data_completes_a_stub() {
    // Homogeneity gives ellipticity; two generators at p = 2 finish R3.
    let mut r = get("Sp(2)/SU(2)");
    let h = AlgebraPresentation::over(
        Prime::TWO,
        vec![MonogenicFactor::exterior("a", 3), MonogenicFactor::exterior("b", 4)],
    )
    .unwrap();
    r.mod_p.insert(
        Prime::TWO,
        PrimeData {
            cohomology: Some(h),
            loop_homology: None,
        },
    );
    let v = verdict(&r).unwrap();
    assert_eq!(v.conclusion, Conclusion::InfinitelyManyGeodesics);
    assert_eq!(v.justification[0].citation, Citation::HomogeneousEllipticity);
    assert!(v.justification[0].axiom);
    assert!(v.chain_is_complete());
}

#[test]
fn not_simply_connected_is_out_of_scope() {
    let mut r = get("S^3");
    r.simply_connected = false;
    let v = verdict(&r).unwrap();
    assert_eq!(v.rules_fired(), BTreeSet::from([Rule::R1]));
    assert_eq!(v.unknown_reason, Some(UnknownReason::MathematicallyOpen));
}

#[test]
fn invalid_records_are_rejected() {
    let mut r = get("S^5");
    r.dimension = Some(6);
    assert!(matches!(verdict(&r), Err(Error::InvalidRecord(_))));

    let mut r = get("S^5");
    let h = AlgebraPresentation::over(
        Prime::TWO,
        vec![MonogenicFactor::exterior("a", 1), MonogenicFactor::exterior("b", 4)],
    )
    .unwrap();
    r.mod_p.get_mut(&Prime::TWO).unwrap().cohomology = Some(h);
    let err = verdict(&r).unwrap_err().to_string();
    assert!(err.contains("simply connected"), "{err}");

    // Two cohomology generators contradict loop homology of linear growth.
    let mut r = get("Q(4,1)");
    let q2 = get("Q(4,2)");
    r.mod_p.get_mut(&Prime::TWO).unwrap().cohomology = q2.mod_p[&Prime::TWO].cohomology.clone();
    let err = verdict(&r).unwrap_err().to_string();
    assert!(err.contains("growth exponent 1"), "{err}");

    let mut r = get("S^3");
    r.rational_cohomology = r.mod_p[&Prime::TWO].cohomology.clone();
    assert!(verdict(&r).is_err());
}

#[test]
fn axiom_tags_match_citations() {
    for (name, v) in verdicts(&builtin_catalog()) {
        let v = v.unwrap();
        assert!(v.chain_is_complete(), "{name}");
        for s in &v.justification {
            assert_eq!(s.axiom, s.citation.is_axiom());
        }
        // Whenever R3 fires with loop data present, R4 fires at the same prime.
        let r = get(&name);
        let r3 = fired_at(&v, Rule::R3);
        let r4 = fired_at(&v, Rule::R4);
        for p in r3 {
            if r.mod_p[&Prime::new(p).unwrap()].loop_homology.is_some() {
                assert!(r4.contains(&p), "{name} at {p}");
            }
        }
    }
}

#[test]
fn catalog_is_sorted_and_deterministic() {
    let a = verdicts(&builtin_catalog());
    let b = verdicts(&builtin_catalog());
    let names: Vec<&String> = a.iter().map(|(n, _)| n).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(a.len(), b.len());
    for ((na, va), (nb, vb)) in a.iter().zip(&b) {
        assert_eq!(na, nb);
        assert_eq!(va.as_ref().unwrap().to_string(), vb.as_ref().unwrap().to_string());
    }
    assert_eq!(builtin_catalog().len(), 9 * (4 + 8) + 7);
}

#[test]
fn lookup_diagnostics() {
    let b = bounds();
    match lookup("V2(R5)", b) {
        Err(LookupError::Unknown { suggestions, .. }) => assert_eq!(suggestions[0], "V2(R^5)"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(lookup("CP^11", b), Err(LookupError::OutsideBound { bound: 10, .. })));
    assert!(matches!(lookup("Q(5,2)", b), Err(LookupError::Invalid(_))));
    assert!(matches!(lookup("G2+(R^4)", b), Err(LookupError::Invalid(_))));
    assert_eq!(lookup(" Q(4, 2) ", b).unwrap().name, "Q(4,2)");
    assert_eq!(lookup("Q(12,-9)", b).unwrap().dimension, Some(23));
}

#[test]
fn verdict_serializes() {
    let v = verdict(&get("Q(4,2)")).unwrap();
    let json = serde_json::to_string(&v).unwrap();
    let back: Verdict = serde_json::from_str(&json).unwrap();
    assert_eq!(back, v);
    let r = get("G2+(R^7)");
    let back: SpaceRecord = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

fn shuffled(a: &AlgebraPresentation, perm: &[usize]) -> AlgebraPresentation {
    let mut factors: Vec<MonogenicFactor> = a.factors().to_vec();
    let k = factors.len();
    for (i, &j) in perm.iter().enumerate().take(k) {
        factors.swap(i, j % k);
    }
    AlgebraPresentation::build(a.characteristic(), factors, a.sign_rule(), a.is_hopf(), a.is_infinite_tensor())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn verdict_ignores_factor_order(idx in 0usize..115, perm in proptest::collection::vec(0usize..4, 4)) {
        let records = builtin_catalog();
        let r = &records[idx % records.len()];
        let mut s = r.clone();
        s.rational_cohomology = s.rational_cohomology.as_ref().map(|a| shuffled(a, &perm));
        for d in s.mod_p.values_mut() {
            d.cohomology = d.cohomology.as_ref().map(|a| shuffled(a, &perm));
            d.loop_homology = d.loop_homology.as_ref().map(|a| shuffled(a, &perm));
        }
        prop_assert_eq!(verdict(r).unwrap(), verdict(&s).unwrap());
    }
}

#[test]
fn rational_surrogate_is_characteristic_zero() {
    for r in builtin_catalog() {
        if let Some(h) = &r.rational_cohomology {
            assert_eq!(h.characteristic(), Characteristic::Zero);
        }
    }
}
