use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::random::{mutate, sample_valid_differential};
use super::*;
use crate::algebra::{AlgebraPresentation, MonogenicFactor, SignRule};
use crate::field::{Characteristic, Prime};
use crate::linalg::Matrix;

fn sphere_bundle(p: u64, t: u32) -> E2Algebra {
    let prime = Prime::new(p).unwrap();
    let b = if p == 2 {
        MonogenicFactor::exterior("b", 4)
    } else {
        MonogenicFactor::truncated("b", 4, 2)
    };
    let h = AlgebraPresentation::over(prime, vec![MonogenicFactor::exterior("a", 3), b]).unwrap();
    let l = AlgebraPresentation::build(
        Characteristic::Prime(prime),
        vec![MonogenicFactor::polynomial("u", 2), MonogenicFactor::polynomial("v", 3)],
        SignRule::Commutative,
        true,
        false,
    )
    .unwrap();
    E2Algebra::new(&h, &l, 7, t, true).unwrap()
}

fn input(r: u32, pairs: &[(&str, &str)]) -> DifferentialInput {
    DifferentialInput {
        r,
        images: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
    }
}

#[test]
fn zero_differential_keeps_the_page() {
    let ss = SpectralSequence::run(sphere_bundle(2, 16), &[]).unwrap();
    assert_eq!(ss.pages().len(), 7);
    assert_eq!(ss.page(2).dims(), ss.e_infinity().dims());
}

#[test]
fn transgression_kills_matched_ranks() {
    let ss = SpectralSequence::run(sphere_bundle(2, 20), &[input(3, &[("u", "a*u^2")]), input(4, &[("v", "b*v^2")])]).unwrap();
    let e3 = ss.page(3);
    let e4 = ss.page(4);
    let d3 = ss.differential(3);
    // rank-nullity at each Known bidegree
    for (&b, entry) in e3.entries() {
        if e4.status(b) != EntryStatus::Known {
            continue;
        }
        let out = rank_of(e3, &d3, b);
        let inc = b.source(3).map_or(0, |s| rank_of(e3, &d3, s));
        assert_eq!(e4.dim(b), entry.dim() - out - inc, "at {b}");
    }
    // u survives only as u^2 in column 0, and a*u^2 is hit
    assert_eq!(e4.dim(Bideg::new(0, 2)), 0);
    assert_eq!(e4.dim(Bideg::new(0, 4)), 1);
    assert_eq!(e4.dim(Bideg::new(3, 0)), 1);
    assert_eq!(e4.dim(Bideg::new(3, 4)), 0);
    // b*v^2 is hit by v on E_4; b*u^3 already failed to be a d_3-cycle
    assert_eq!(e4.dim(Bideg::new(4, 6)), 1);
    assert_eq!(ss.e_infinity().dim(Bideg::new(4, 6)), 0);
}

fn rank_of(page: &Page, d: &Differential, b: Bideg) -> usize {
    let Some(entry) = page.entry(b) else { return 0 };
    let Some(target) = page.entry(b.shifted(page.r())) else { return 0 };
    if entry.basis.is_empty() || target.basis.is_empty() {
        return 0;
    }
    let images: Vec<Vec<u64>> = entry
        .basis
        .iter()
        .map(|x| target.coordinates(&d.apply(page, &x.rep).unwrap().unwrap().coords).unwrap())
        .collect();
    Matrix::from_rows(page.e2().field(), target.basis.len(), images).rank()
}

#[test]
fn wrong_bidegree_is_rejected() {
    let err = SpectralSequence::run(sphere_bundle(2, 12), &[input(3, &[("u", "b")])]).unwrap_err();
    assert!(matches!(err, Error::InvalidDifferential { page: 3, .. }), "{err}");
    let err = SpectralSequence::run(sphere_bundle(2, 12), &[input(3, &[("u^2", "a*u^3")])]).unwrap_err();
    assert!(err.to_string().contains("decomposable"), "{err}");
}

#[test]
fn leibniz_violation_is_reported() {
    let e2 = Arc::new(sphere_bundle(3, 14));
    let e2page = Page::initial(e2.clone());
    let page = e2page.turn(&Differential::zero(&e2page)).unwrap();
    let (page, good) = differential_from_input(&page, &input(3, &[("u", "a*u^2")])).unwrap();
    good.validate(&page).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (bad, _) = mutate(&page, &good, &mut rng).unwrap();
    let err = bad.validate(&page).unwrap_err();
    assert!(err.to_string().contains("Leibniz") || err.to_string().contains("bidegree"), "{err}");
}

#[test]
fn survival_exponent_counts_nonzero_columns() {
    let p = Prime::new(3).unwrap();
    let q: BTreeSet<u32> = [0, 3, 4, 7].into();
    assert_eq!(survival_exponent(p, 7, &q), 27);
    let sphere: BTreeSet<u32> = [0, 9].into();
    assert_eq!(survival_exponent(p, 9, &sphere), 3);
    let n = 6;
    let full: BTreeSet<u32> = (0..=n).filter(|&d| d != 1 && d != n - 1).collect();
    assert_eq!(survival_exponent(p, n, &full), 3u64.pow(n - 2));
}

#[test]
fn central_power_certificates() {
    for p in [2u64, 3] {
        let ss = SpectralSequence::run(sphere_bundle(p, 24), &[input(3, &[("u", "a*u^2")])]).unwrap();
        let u = ss.e2().parse("u").unwrap();
        let CertificateOutcome::Certified(c) = certify_central_power(&ss, &u).unwrap() else {
            panic!("inside truncation")
        };
        assert_eq!(c.exponent, p);
        assert!(c.exponent <= c.bound);
        let v2 = ss.e2().parse("v^2").unwrap();
        let CertificateOutcome::Certified(c) = certify_central_power(&ss, &v2).unwrap() else {
            panic!("inside truncation")
        };
        assert_eq!(c.exponent, 1);
        let v = ss.e2().parse("v").unwrap();
        assert!(matches!(certify_central_power(&ss, &v), Err(Error::NotEffectiveCentral(_))));
        let a = ss.e2().parse("a").unwrap();
        assert!(matches!(certify_central_power(&ss, &a), Err(Error::NotEffectiveCentral(_))));
    }
}

#[test]
fn certificate_reports_required_truncation() {
    let ss = SpectralSequence::run(sphere_bundle(3, 5), &[input(3, &[("u", "a*u^2")])]).unwrap();
    let u = ss.e2().parse("u").unwrap();
    let out = certify_central_power(&ss, &u).unwrap();
    assert!(matches!(out, CertificateOutcome::Indeterminate { required_truncation: 9, .. }), "{out:?}");
}

#[test]
fn truncation_edge_is_indeterminate() {
    let t = 10;
    let ss = SpectralSequence::run(sphere_bundle(2, t), &[input(3, &[("u", "a*u^2")])]).unwrap();
    let e4 = ss.page(4);
    // (3, t+3) has total degree t; d_3 into it starts at total degree t + 1
    assert_eq!(e4.status(Bideg::new(3, t + 3)), EntryStatus::Indeterminate);
    assert_eq!(e4.status(Bideg::new(3, t + 2)), EntryStatus::Known);
    assert_eq!(e4.status(Bideg::new(0, t)), EntryStatus::Known);
    assert_eq!(e4.status(Bideg::new(3, 0)), EntryStatus::Known);
    assert_eq!(e4.status(Bideg::new(1, 0)), EntryStatus::ZeroBySupport);
}

#[test]
fn random_differentials_validate_and_mutants_fail() {
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ss = SpectralSequence::run_with(sphere_bundle(2, 18), |page| {
            let (d, _) = sample_valid_differential(page, &mut rng, 20);
            let mut mrng = ChaCha8Rng::seed_from_u64(seed + 100);
            if let Some((bad, _)) = mutate(page, &d, &mut mrng) {
                assert!(bad.validate(page).is_err());
            }
            Ok((page.clone(), d))
        })
        .unwrap();
        let table = ss.e_infinity().product_table();
        assert!(filtration_nilpotency_check(&table, 7).holds);
    }
}

#[test]
fn torus_products_reach_the_dimension() {
    let p = Prime::new(2).unwrap();
    let n = 3;
    let h = AlgebraPresentation::over(p, (1..=n).map(|i| MonogenicFactor::exterior(format!("x{i}"), 1)).collect())
        .unwrap();
    let unit = AlgebraPresentation::unit(Characteristic::Prime(p));
    let ss = SpectralSequence::run(E2Algebra::new(&h, &unit, n, 2, false).unwrap(), &[]).unwrap();
    let r = filtration_nilpotency_check(&ss.e_infinity().product_table(), n);
    assert!(r.holds);
    assert_eq!(r.nilpotency_order, n as usize);
}
