//! Random valid differentials and invalid mutations, for property tests and
//! the self-check.

use std::collections::HashMap;

use rand::Rng;

use super::e2::{BiElem, Bideg};
use super::page::{BasisKind, Differential, EntryStatus, Page};

/// Random images for the page generators, extended by the Leibniz rule.
/// Each generator gets a random class in its target with probability one
/// half; a random boundary is added to exercise the quotient.
pub fn random_differential<R: Rng>(page: &Page, rng: &mut R) -> Differential {
    let e2 = page.e2();
    let p = e2.prime().get();
    let mut gens = HashMap::new();
    for (b, i) in page.generators() {
        let tb = b.shifted(page.r());
        let Some(target) = page.entry(tb) else { continue };
        if target.basis.is_empty() || !rng.gen_bool(0.5) {
            continue;
        }
        let mut im = e2.zero(tb).expect("stored");
        for x in &target.basis {
            im = e2.add_scaled(&im, &x.rep, rng.gen_range(0..p));
        }
        for v in target.boundaries.basis() {
            let bnd = BiElem {
                bideg: tb,
                coords: v.clone(),
            };
            im = e2.add_scaled(&im, &bnd, rng.gen_range(0..p));
        }
        gens.insert((b, i), im);
    }
    Differential::from_generator_images(page, &gens)
}

/// Rejection sampling: the first random differential passing validation,
/// falling back to zero after `attempts` failures. Returns the number of
/// rejected samples too.
pub fn sample_valid_differential<R: Rng>(page: &Page, rng: &mut R, attempts: usize) -> (Differential, usize) {
    for k in 0..attempts {
        let d = random_differential(page, rng);
        if d.validate(page).is_ok() {
            return (d, k);
        }
    }
    (Differential::zero(page), attempts)
}

/// Kind of corruption applied by [`mutate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// A nonzero class added to the image of a product basis element.
    Decomposable,
    /// An image moved to a bidegree other than `(s - r, t + r - 1)`.
    WrongBidegree,
}

/// Corrupts a differential so that validation must fail: perturbs the image
/// of a decomposable basis element by a nonzero class (breaking the Leibniz
/// rule on its chosen factors), or, when no such element exists, gives some
/// image a wrong bidegree.
pub fn mutate<R: Rng>(page: &Page, d: &Differential, rng: &mut R) -> Option<(Differential, Mutation)> {
    let e2 = page.e2();
    let p = e2.prime().get();
    let known = |b: Bideg| page.status(b) == EntryStatus::Known;
    let mut decomposable = Vec::new();
    for (&b, entry) in page.entries() {
        let tb = b.shifted(page.r());
        if !known(b) || !known(tb) || page.dim(tb) == 0 {
            continue;
        }
        for (i, x) in entry.basis.iter().enumerate() {
            if let BasisKind::Product { generator, other } = x.kind {
                if known(generator.0) && known(other.0) {
                    decomposable.push((b, i, tb));
                }
            }
        }
    }
    let mut out = d.clone();
    if !decomposable.is_empty() {
        let (b, i, tb) = decomposable[rng.gen_range(0..decomposable.len())];
        let target = page.entry(tb).expect("stored");
        let mut delta = e2.zero(tb).expect("stored");
        while page.is_zero_class(&delta) {
            for x in &target.basis {
                delta = e2.add_scaled(&delta, &x.rep, rng.gen_range(0..p));
            }
        }
        let slot = &mut out.images.get_mut(&b).expect("every entry has images")[i];
        let current = slot.clone().unwrap_or_else(|| e2.zero(tb).expect("stored"));
        *slot = Some(e2.add_scaled(&current, &delta, 1));
        return Some((out, Mutation::Decomposable));
    }
    // wrong bidegree: any stored bidegree other than the target
    let candidates: Vec<(Bideg, usize)> = page
        .entries()
        .flat_map(|(b, e)| (0..e.basis.len()).map(move |i| (*b, i)))
        .collect();
    if candidates.is_empty() {
        return None;
    }
    let (b, i) = candidates[rng.gen_range(0..candidates.len())];
    let right = b.shifted(page.r());
    let wrong = [Bideg::new(b.col + page.r() + 1, b.t), Bideg::new(b.col, b.t), Bideg::new(b.col + 1, 0)]
        .into_iter()
        .find(|w| *w != right && e2.dim(*w).is_some_and(|n| n > 0))?;
    let mut im = e2.zero(wrong).expect("stored");
    im.coords[0] = 1;
    out.images.get_mut(&b).expect("every entry has images")[i] = Some(im);
    Some((out, Mutation::WrongBidegree))
}
