//! Pages `E_r = Z_r / B_r`, differentials, validation and page turning.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use super::e2::{BiElem, Bideg, E2Algebra};
use crate::error::{Error, Result};
use crate::linalg::{Coordinates, Matrix, Subspace};

/// What is known about one bidegree of a page.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Known,
    /// Zero because `E_2` vanishes there.
    ZeroBySupport,
    /// Depends on differentials leaving bidegrees above the truncation.
    Indeterminate,
}

/// How a page basis element was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Unit,
    /// `generator * other`, both page basis elements of smaller bidegrees.
    Product { generator: (Bideg, usize), other: (Bideg, usize) },
    Generator,
}

#[derive(Debug, Clone)]
pub struct BasisElem {
    pub rep: BiElem,
    pub kind: BasisKind,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub cycles: Subspace,
    pub boundaries: Subspace,
    pub basis: Vec<BasisElem>,
    pub status: EntryStatus,
    coords: Coordinates,
}

impl Entry {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Page coordinates of a cycle representative, `None` if `z` is not a cycle.
    pub fn coordinates(&self, z: &[u64]) -> Option<Vec<u64>> {
        let nb = self.boundaries.dim();
        self.coords.solve(z).map(|c| c[nb..].to_vec())
    }

    pub fn is_boundary(&self, z: &[u64]) -> bool {
        self.boundaries.contains(z)
    }
}

#[derive(Debug, Clone)]
pub struct Page {
    r: u32,
    e2: Arc<E2Algebra>,
    entries: BTreeMap<Bideg, Entry>,
}

impl Page {
    /// The `E_2` page with the monomial basis.
    pub fn initial(e2: Arc<E2Algebra>) -> Page {
        let field = e2.field();
        let mut cycles = HashMap::new();
        let mut boundaries = HashMap::new();
        let mut status = HashMap::new();
        for b in e2.bidegrees() {
            let n = e2.dim(b).unwrap_or(0);
            cycles.insert(b, Subspace::whole(field, n));
            boundaries.insert(b, Subspace::new(field, n));
            status.insert(b, if n == 0 { EntryStatus::ZeroBySupport } else { EntryStatus::Known });
        }
        Page::assemble(2, e2, cycles, boundaries, status, &[])
    }

    fn assemble(
        r: u32,
        e2: Arc<E2Algebra>,
        mut cycles: HashMap<Bideg, Subspace>,
        mut boundaries: HashMap<Bideg, Subspace>,
        status: HashMap<Bideg, EntryStatus>,
        preferred: &[BiElem],
    ) -> Page {
        let field = e2.field();
        let mut entries: BTreeMap<Bideg, Entry> = BTreeMap::new();
        let mut generators: Vec<(Bideg, usize)> = Vec::new();
        for b in e2.bidegrees() {
            let z = cycles.remove(&b).expect("every stored bidegree has cycles");
            let bd = boundaries.remove(&b).expect("every stored bidegree has boundaries");
            let mut span = bd.clone();
            let mut basis: Vec<BasisElem> = Vec::new();
            if b == Bideg::new(0, 0) {
                if z.dim() > bd.dim() {
                    let unit = e2.unit();
                    span.insert(unit.coords.clone());
                    basis.push(BasisElem {
                        rep: unit,
                        kind: BasisKind::Unit,
                    });
                }
            } else if z.dim() > bd.dim() {
                'products: for &(gb, gi) in &generators {
                    let Some(ob) = sub(b, gb) else { continue };
                    if ob == Bideg::new(0, 0) {
                        continue;
                    }
                    let Some(other) = entries.get(&ob) else { continue };
                    let g = &entries[&gb].basis[gi].rep;
                    for (oi, o) in other.basis.iter().enumerate() {
                        let prod = e2.multiply(g, &o.rep).expect("inside truncation");
                        if span.insert(prod.coords.clone()) {
                            basis.push(BasisElem {
                                rep: prod,
                                kind: BasisKind::Product {
                                    generator: (gb, gi),
                                    other: (ob, oi),
                                },
                            });
                            if span.dim() == z.dim() {
                                break 'products;
                            }
                        }
                    }
                }
                let candidates = preferred
                    .iter()
                    .filter(|x| x.bideg == b && z.contains(&x.coords))
                    .map(|x| x.coords.clone())
                    .chain(z.basis().iter().cloned());
                for v in candidates {
                    if span.dim() == z.dim() {
                        break;
                    }
                    if span.insert(v.clone()) {
                        generators.push((b, basis.len()));
                        basis.push(BasisElem {
                            rep: BiElem { bideg: b, coords: v },
                            kind: BasisKind::Generator,
                        });
                    }
                }
            }
            let n = e2.dim(b).unwrap_or(0);
            let mut family: Vec<Vec<u64>> = bd.basis().to_vec();
            family.extend(basis.iter().map(|e| e.rep.coords.clone()));
            let coords = Coordinates::new(field, n, &family).expect("boundaries and page basis are independent");
            let st = status[&b];
            let st = if basis.is_empty() && st == EntryStatus::Known && e2.dim(b) == Some(0) {
                EntryStatus::ZeroBySupport
            } else {
                st
            };
            entries.insert(
                b,
                Entry {
                    cycles: z,
                    boundaries: bd,
                    basis,
                    status: st,
                    coords,
                },
            );
        }
        Page { r, e2, entries }
    }

    /// Same page with a basis whose generators include `preferred` where possible.
    pub fn rebased(&self, preferred: &[BiElem]) -> Page {
        let cycles = self.entries.iter().map(|(b, e)| (*b, e.cycles.clone())).collect();
        let boundaries = self.entries.iter().map(|(b, e)| (*b, e.boundaries.clone())).collect();
        let status = self.entries.iter().map(|(b, e)| (*b, e.status)).collect();
        Page::assemble(self.r, self.e2.clone(), cycles, boundaries, status, preferred)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn e2(&self) -> &Arc<E2Algebra> {
        &self.e2
    }

    pub fn entry(&self, b: Bideg) -> Option<&Entry> {
        self.entries.get(&b)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Bideg, &Entry)> {
        self.entries.iter()
    }

    pub fn dim(&self, b: Bideg) -> usize {
        self.entries.get(&b).map_or(0, Entry::dim)
    }

    pub fn status(&self, b: Bideg) -> EntryStatus {
        match self.entries.get(&b) {
            Some(e) => e.status,
            None if b.col > self.e2.dimension() => EntryStatus::ZeroBySupport,
            None => EntryStatus::Indeterminate,
        }
    }

    /// Generators of the page as an algebra.
    pub fn generators(&self) -> Vec<(Bideg, usize)> {
        self.entries
            .iter()
            .flat_map(|(b, e)| {
                e.basis
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| x.kind == BasisKind::Generator)
                    .map(move |(i, _)| (*b, i))
            })
            .collect()
    }

    /// Whether `z` represents zero on this page.
    pub fn is_zero_class(&self, z: &BiElem) -> bool {
        match self.entries.get(&z.bideg) {
            Some(e) => e.is_boundary(&z.coords),
            None => true,
        }
    }

    /// Dimensions per bidegree (only nonzero entries).
    pub fn dims(&self) -> BTreeMap<Bideg, usize> {
        self.entries.iter().filter(|(_, e)| e.dim() > 0).map(|(b, e)| (*b, e.dim())).collect()
    }

    /// Turns the page with a validated differential.
    pub fn turn(&self, d: &Differential) -> Result<Page> {
        if d.r != self.r {
            return Err(Error::InvalidDifferential {
                page: self.r,
                reason: format!("differential belongs to page {}", d.r),
            });
        }
        let field = self.e2.field();
        let r = self.r;
        let mut cycles = HashMap::new();
        let mut boundaries = HashMap::new();
        let mut status = HashMap::new();
        for (&b, entry) in &self.entries {
            // new cycles: page basis combinations with image in B_r(target)
            let mut z = entry.boundaries.clone();
            let tb = b.shifted(r);
            match self.entries.get(&tb) {
                Some(target) if !entry.basis.is_empty() => {
                    let images: Vec<Vec<u64>> = d.images[&b]
                        .iter()
                        .map(|im| match im {
                            Some(im) => target.boundaries.reduce(&im.coords),
                            None => vec![0; target.cycles.ambient()],
                        })
                        .collect();
                    let rows: Vec<Vec<u64>> = (0..target.cycles.ambient())
                        .map(|k| images.iter().map(|v| v[k]).collect())
                        .collect();
                    for combo in Matrix::from_rows(field, images.len(), rows).kernel() {
                        let mut v = vec![0; entry.cycles.ambient()];
                        for (c, e) in combo.iter().zip(&entry.basis) {
                            crate::linalg::axpy(field, &mut v, &e.rep.coords, *c);
                        }
                        z.insert(v);
                    }
                }
                _ => {
                    for e in &entry.basis {
                        z.insert(e.rep.coords.clone());
                    }
                }
            }
            // new boundaries: images of the source
            let mut bd = entry.boundaries.clone();
            let source = b.source(r);
            if let Some(sb) = source {
                if let Some(imgs) = d.images.get(&sb) {
                    for im in imgs.iter().flatten() {
                        bd.insert(im.coords.clone());
                    }
                }
            }
            // targets have lower total degree and are always stored
            let incoming_unknown = source.is_some_and(|sb| {
                if self.e2.contains(sb) {
                    self.status(sb) == EntryStatus::Indeterminate
                } else {
                    self.e2.dim_untruncated(sb) > 0
                }
            });
            let outgoing_unknown = !entry.basis.is_empty() && self.status(tb) == EntryStatus::Indeterminate;
            let st = match entry.status {
                EntryStatus::ZeroBySupport => EntryStatus::ZeroBySupport,
                EntryStatus::Indeterminate => EntryStatus::Indeterminate,
                EntryStatus::Known if incoming_unknown || outgoing_unknown => EntryStatus::Indeterminate,
                EntryStatus::Known => EntryStatus::Known,
            };
            cycles.insert(b, z);
            boundaries.insert(b, bd);
            status.insert(b, st);
        }
        Ok(Page::assemble(r + 1, self.e2.clone(), cycles, boundaries, status, &[]))
    }

    /// Multiplication table of the page on its basis, restricted to Known
    /// entries: `(x, y) -> page coordinates of xy`.
    pub fn product_table(&self) -> super::filtration::ProductTable {
        let mut index: HashMap<(Bideg, usize), usize> = HashMap::new();
        let mut columns = Vec::new();
        let mut labels = Vec::new();
        for (&b, e) in &self.entries {
            if e.status != EntryStatus::Known {
                continue;
            }
            for (i, x) in e.basis.iter().enumerate() {
                index.insert((b, i), columns.len());
                columns.push(b.col);
                labels.push(self.e2.format(&x.rep));
            }
        }
        let mut products = HashMap::new();
        for (&(b1, i1), &g1) in &index {
            for (&(b2, i2), &g2) in &index {
                let b = b1.plus(b2);
                let Some(target) = self.entries.get(&b) else { continue };
                if target.status != EntryStatus::Known {
                    continue;
                }
                let x = &self.entries[&b1].basis[i1].rep;
                let y = &self.entries[&b2].basis[i2].rep;
                let Some(prod) = self.e2.multiply(x, y) else { continue };
                let c = target.coordinates(&prod.coords).expect("cycles form a subalgebra");
                let terms: Vec<(usize, u64)> =
                    c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(k, &v)| (index[&(b, k)], v)).collect();
                if !terms.is_empty() {
                    products.insert((g1, g2), terms);
                }
            }
        }
        super::filtration::ProductTable {
            prime: self.e2.prime(),
            columns,
            labels,
            products,
        }
    }
}

fn sub(b: Bideg, g: Bideg) -> Option<Bideg> {
    Some(Bideg::new(b.col.checked_sub(g.col)?, b.t.checked_sub(g.t)?))
}

/// `d_r` as a linear map on the page basis. `images[b][i]` is a cycle
/// representative of `d(basis_i)`, or `None` when the target bidegree is
/// not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential {
    pub r: u32,
    pub images: BTreeMap<Bideg, Vec<Option<BiElem>>>,
}

impl Differential {
    pub fn zero(page: &Page) -> Differential {
        Differential::from_generator_images(page, &HashMap::new())
    }

    /// Extends generator images to the whole page by the Leibniz rule along
    /// the product decompositions chosen for the basis. Generators without
    /// an image map to zero.
    pub fn from_generator_images(page: &Page, gens: &HashMap<(Bideg, usize), BiElem>) -> Differential {
        let e2 = page.e2();
        let f = e2.field();
        let r = page.r();
        let mut images: BTreeMap<Bideg, Vec<Option<BiElem>>> = BTreeMap::new();
        for (&b, entry) in &page.entries {
            let target = b.shifted(r);
            let zero = || e2.zero(target);
            let mut row: Vec<Option<BiElem>> = Vec::with_capacity(entry.basis.len());
            for (i, x) in entry.basis.iter().enumerate() {
                let im = match x.kind {
                    BasisKind::Unit => zero(),
                    BasisKind::Generator => gens.get(&(b, i)).cloned().or_else(zero),
                    BasisKind::Product { generator, other } => {
                        let g = &page.entries[&generator.0].basis[generator.1].rep;
                        let o = &page.entries[&other.0].basis[other.1].rep;
                        let dg = images[&generator.0][generator.1].clone();
                        let d_o = images[&other.0][other.1].clone();
                        let mut acc = zero();
                        if let (Some(a), Some(dg)) = (acc.as_mut(), dg) {
                            if let Some(p) = e2.multiply(&dg, o) {
                                *a = e2.add_scaled(a, &p, 1);
                            }
                        }
                        if let (Some(a), Some(d_o)) = (acc.as_mut(), d_o) {
                            if let Some(p) = e2.multiply(g, &d_o) {
                                *a = e2.add_scaled(a, &p, f.sign(generator.0.is_odd()));
                            }
                        }
                        acc
                    }
                };
                row.push(im);
            }
            images.insert(b, row);
        }
        Differential { r, images }
    }

    /// `d(z)` for a cycle representative `z`; `Ok(None)` when the target
    /// lies outside the columns.
    pub fn apply(&self, page: &Page, z: &BiElem) -> Result<Option<BiElem>> {
        let invalid = |reason: String| Error::InvalidDifferential { page: self.r, reason };
        if z.bideg.col > page.e2().dimension() {
            return Ok(None);
        }
        let entry = page.entry(z.bideg).ok_or_else(|| invalid(format!("{} is not stored", z.bideg)))?;
        let c = entry
            .coordinates(&z.coords)
            .ok_or_else(|| invalid(format!("{} is not a d_{}-cycle", page.e2().format(z), self.r)))?;
        let e2 = page.e2();
        let tb = z.bideg.shifted(self.r);
        let Some(mut acc) = e2.zero(tb) else { return Ok(None) };
        let row = &self.images[&z.bideg];
        for (k, &ck) in c.iter().enumerate() {
            if ck == 0 {
                continue;
            }
            match &row[k] {
                Some(im) if im.bideg == tb => acc = e2.add_scaled(&acc, im, ck),
                Some(im) => {
                    return Err(invalid(format!(
                        "image of a class at {} has bidegree {}, expected {}",
                        z.bideg, im.bideg, tb
                    )))
                }
                None => {}
            }
        }
        Ok(Some(acc))
    }

    /// Checks bidegrees, that images are cycles, the Leibniz rule with the
    /// total-degree sign on every pair of basis elements, and `d∘d = 0`,
    /// wherever all entries involved are Known.
    pub fn validate(&self, page: &Page) -> Result<()> {
        let invalid = |reason: String| Error::InvalidDifferential { page: self.r, reason };
        if self.r != page.r() {
            return Err(invalid(format!("page is E_{}", page.r())));
        }
        let e2 = page.e2();
        let f = e2.field();
        let known = |b: Bideg| page.status(b) != EntryStatus::Indeterminate;
        for (&b, entry) in &page.entries {
            let row = self
                .images
                .get(&b)
                .ok_or_else(|| invalid(format!("no images given at {b}")))?;
            if row.len() != entry.basis.len() {
                return Err(invalid(format!("{} images at {b}, page has {}", row.len(), entry.basis.len())));
            }
            let target = Some(b.shifted(self.r)).filter(|tb| e2.dim(*tb).is_some());
            for (i, im) in row.iter().enumerate() {
                let label = || e2.format(&entry.basis[i].rep);
                match (im, target) {
                    (None, None) => {}
                    (None, Some(tb)) if e2.dim(tb) == Some(0) => {}
                    (None, Some(tb)) => return Err(invalid(format!("missing image of {} in {tb}", label()))),
                    (Some(im), None) => {
                        if !im.is_zero() {
                            return Err(invalid(format!(
                                "d({}) has bidegree {} but the target is not stored",
                                label(),
                                im.bideg
                            )));
                        }
                    }
                    (Some(im), Some(tb)) => {
                        if im.bideg != tb {
                            return Err(invalid(format!(
                                "d({}) has bidegree {}, expected {} for d_{}",
                                label(),
                                im.bideg,
                                tb,
                                self.r
                            )));
                        }
                        let Some(te) = page.entry(tb) else {
                            // outside the columns: only the zero-dimensional image is possible
                            continue;
                        };
                        if !te.cycles.contains(&im.coords) {
                            return Err(invalid(format!(
                                "d({}) = {} is not a cycle on E_{}",
                                label(),
                                e2.format(im),
                                self.r
                            )));
                        }
                    }
                }
            }
        }
        // Leibniz; the zero differential satisfies it trivially
        let trivial = self.images.values().flatten().flatten().all(|im| im.is_zero());
        let stored = |b: Bideg, i: usize| -> Option<&BiElem> {
            self.images.get(&b).and_then(|row| row[i].as_ref()).filter(|im| !im.is_zero())
        };
        for (&b1, e1) in &page.entries {
            if trivial {
                break;
            }
            if b1 == Bideg::new(0, 0) || e1.basis.is_empty() || !known(b1) {
                continue;
            }
            for (&b2, e2e) in &page.entries {
                if b2 == Bideg::new(0, 0) || e2e.basis.is_empty() || !known(b2) {
                    continue;
                }
                let b = b1.plus(b2);
                if !e2.contains(b) || !known(b) {
                    continue;
                }
                let tb = b.shifted(self.r);
                if !known(tb) || e2.dim(tb).unwrap_or(0) == 0 {
                    continue;
                }
                for (i, x) in e1.basis.iter().enumerate() {
                    let dx = stored(b1, i);
                    for (j, y) in e2e.basis.iter().enumerate() {
                        let xy = e2.multiply(&x.rep, &y.rep).expect("inside truncation");
                        let Some(lhs) = self.apply(page, &xy)? else { continue };
                        let dy = stored(b2, j);
                        let mut rhs = e2.zero(lhs.bideg).expect("stored");
                        if let Some(dx) = dx {
                            rhs = e2.add_scaled(&rhs, &e2.multiply(dx, &y.rep).expect("stored"), 1);
                        }
                        if let Some(dy) = dy {
                            let sign = f.sign(b1.is_odd());
                            rhs = e2.add_scaled(&rhs, &e2.multiply(&x.rep, dy).expect("stored"), sign);
                        }
                        let diff = e2.add_scaled(&lhs, &rhs, f.neg(1));
                        if !page.is_zero_class(&diff) {
                            return Err(invalid(format!(
                                "Leibniz rule fails on ({}, {}): d(xy) = {}, d(x)y ± x d(y) = {}",
                                e2.format(&x.rep),
                                e2.format(&y.rep),
                                e2.format(&lhs),
                                e2.format(&rhs)
                            )));
                        }
                    }
                }
            }
        }
        // d∘d = 0
        for (&b, entry) in &page.entries {
            if !known(b) {
                continue;
            }
            for x in &entry.basis {
                let Some(dx) = self.apply(page, &x.rep)? else { continue };
                if !known(dx.bideg) {
                    continue;
                }
                if let Some(ddx) = self.apply(page, &dx)? {
                    if !page.is_zero_class(&ddx) {
                        return Err(invalid(format!(
                            "d(d({})) = {} is nonzero",
                            e2.format(&x.rep),
                            e2.format(&ddx)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_zero_on(&self, page: &Page) -> bool {
        self.images
            .values()
            .flatten()
            .flatten()
            .all(|im| page.is_zero_class(im))
    }

    /// Nonzero generator images, formatted.
    pub fn describe(&self, page: &Page) -> Vec<(String, String)> {
        let e2 = page.e2();
        let mut out = Vec::new();
        for (b, i) in page.generators() {
            if let Some(Some(im)) = self.images.get(&b).map(|row| &row[i]) {
                if !page.is_zero_class(im) {
                    out.push((e2.format(&page.entries[&b].basis[i].rep), e2.format(im)));
                }
            }
        }
        out
    }
}
