use closedgeo::algebra::{AlgebraPresentation, FactorKind, MonogenicFactor, SignRule};
use closedgeo::homalg::{depth, ext_table, is_elliptic, is_gorenstein, DepthResult};
use closedgeo::{Characteristic, Prime, Truth};
use proptest::prelude::*;

fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

/// Hopf-compatible factors at `prime`: truncation heights are powers of `prime`.
fn hopf_factor(prime: u64) -> impl Strategy<Value = MonogenicFactor> {
    let two = prime == 2;
    prop_oneof![
        (1u32..6).prop_map(move |d| MonogenicFactor::exterior("e", if two { d } else { 2 * d - 1 })),
        (1u32..5).prop_map(move |d| MonogenicFactor::polynomial("x", if two { d } else { 2 * d })),
        (1u32..5, 1u32..3).prop_map(move |(d, e)| MonogenicFactor::truncated(
            "t",
            if two { d } else { 2 * d },
            (prime as u32).pow(e)
        )),
    ]
}

fn hopf_algebra(prime: u64) -> impl Strategy<Value = AlgebraPresentation> {
    prop::collection::vec(hopf_factor(prime), 0..4).prop_map(move |fs| {
        let mut a = AlgebraPresentation::unit(Characteristic::Prime(p(prime)));
        for f in fs {
            a = a.tensor(&AlgebraPresentation::over(p(prime), vec![f]).unwrap()).unwrap();
        }
        a.with_hopf(true).unwrap()
    })
}

fn any_hopf() -> impl Strategy<Value = AlgebraPresentation> {
    prop_oneof![hopf_algebra(2), hopf_algebra(3), hopf_algebra(5)]
}

#[test]
fn polynomial_times_truncated() {
    let a = AlgebraPresentation::over(
        p(3),
        vec![MonogenicFactor::polynomial("x", 2), MonogenicFactor::truncated("y", 2, 4)],
    )
    .unwrap();
    let t = ext_table(&a);
    assert_eq!(t.entries.len(), 1);
    assert_eq!(t.get(1, -4), 1);
    let g = is_gorenstein(&a);
    assert!(g.is_gorenstein);
    assert_eq!(g.socle_bidegree, Some((1, -4)));
}

#[test]
fn gorenstein_examples() {
    let x = AlgebraPresentation::over(p(2), vec![MonogenicFactor::polynomial("x", 2)]).unwrap();
    assert_eq!(is_gorenstein(&x).socle_bidegree, Some((1, 2)));
    let inf = x.with_infinite_tensor(true).unwrap();
    assert!(!is_gorenstein(&inf).is_gorenstein);
}

#[test]
fn infinite_tensor_is_not_elliptic() {
    let a = AlgebraPresentation::over(p(3), vec![MonogenicFactor::polynomial("x", 2)])
        .unwrap()
        .with_hopf(true)
        .unwrap()
        .with_infinite_tensor(true)
        .unwrap();
    let r = is_elliptic(&a).unwrap();
    assert!(!r.elliptic);
    assert!(!r.finite_depth);
    assert!(r.conditions_agree());
    // the commutator computation itself still finds a nilpotent algebra
    assert_eq!(r.lower_central_series, Truth::True);
}

#[test]
fn finite_dimensional_hopf_algebra_is_elliptic() {
    let a = AlgebraPresentation::over(
        p(2),
        vec![MonogenicFactor::truncated("x", 1, 4), MonogenicFactor::exterior("y", 3)],
    )
    .unwrap()
    .with_hopf(true)
    .unwrap();
    let r = is_elliptic(&a).unwrap();
    assert!(r.elliptic && r.conditions_agree());
}

#[test]
fn loop_homology_with_unsigned_odd_generator_is_elliptic() {
    let a = AlgebraPresentation::build(
        Characteristic::Prime(p(3)),
        vec![MonogenicFactor::polynomial("u", 2), MonogenicFactor::polynomial("v", 3)],
        SignRule::Commutative,
        true,
        false,
    )
    .unwrap();
    let r = is_elliptic(&a).unwrap();
    assert!(r.elliptic && r.conditions_agree(), "{r:?}");
}

#[test]
fn rational_loop_homology_is_elliptic() {
    let a = AlgebraPresentation::build(
        Characteristic::Zero,
        vec![MonogenicFactor::exterior("x", 1), MonogenicFactor::polynomial("y", 4)],
        SignRule::Graded,
        true,
        false,
    )
    .unwrap();
    let r = is_elliptic(&a).unwrap();
    assert!(r.elliptic && r.conditions_agree());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn depth_is_additive(a in hopf_algebra(3), b in hopf_algebra(3)) {
        let t = a.tensor(&b).unwrap();
        let (DepthResult::Finite(da), DepthResult::Finite(db)) = (depth(&a), depth(&b)) else {
            panic!("finite lists have finite depth");
        };
        prop_assert_eq!(depth(&t), DepthResult::Finite(da + db));
        prop_assert_eq!(
            is_gorenstein(&t).is_gorenstein,
            is_gorenstein(&a).is_gorenstein && is_gorenstein(&b).is_gorenstein
        );
    }

    #[test]
    fn depth_counts_polynomial_factors(a in any_hopf()) {
        let DepthResult::Finite(d) = depth(&a) else { panic!() };
        prop_assert!(d as usize <= a.factors().len());
        prop_assert_eq!(d, a.poincare_series().growth_class().k0);
        let counted = a.factors().iter().filter(|f| f.kind == FactorKind::Polynomial).count();
        prop_assert_eq!(d as usize, counted);
    }

    #[test]
    fn four_conditions_agree(a in any_hopf()) {
        let r = is_elliptic(&a).unwrap();
        prop_assert!(r.conditions_agree(), "{:?}", r);
        prop_assert!(r.elliptic);
    }
}
