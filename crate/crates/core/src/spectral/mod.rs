//! Truncated multiplicative spectral sequence with
//! `E_2^{s,t} = H^{-s}(M) ⊗ H_t(ΩM)` and `d_r` of bidegree `(-r, r - 1)`.
//!
//! Differentials are inputs: they are given on page generators, extended as
//! derivations (sign `(-1)^{s+t}`), validated, and used to turn pages. The
//! page `E_{n+1}` is final since `d_r = 0` for `r > n`.

pub mod certificate;
pub mod e2;
pub mod filtration;
pub mod page;
pub mod random;

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use certificate::{acting_pages, certify_central_power, survival_exponent, CertificateOutcome, SurvivalCertificate};
pub use e2::{BiElem, Bideg, E2Algebra};
pub use filtration::{filtration_nilpotency_check, FiltrationReport, ProductTable};
pub use page::{BasisKind, Differential, EntryStatus, Page};

use crate::error::{Error, Result};

/// User-supplied generator images on one page, as expressions in the
/// cohomology and loop generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialInput {
    pub r: u32,
    pub images: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct SpectralSequence {
    e2: Arc<E2Algebra>,
    /// `pages[i]` is `E_{i+2}`; the last one is `E_{n+1}`.
    pages: Vec<Page>,
    /// `differentials[i]` acts on `pages[i]`.
    differentials: Vec<Differential>,
}

impl SpectralSequence {
    /// Runs every page with the given images; pages without input get the
    /// zero differential.
    pub fn run(e2: E2Algebra, inputs: &[DifferentialInput]) -> Result<Self> {
        let n = e2.dimension();
        let mut by_page: HashMap<u32, &DifferentialInput> = HashMap::new();
        for input in inputs {
            if input.r < 2 || input.r > n {
                return Err(Error::InvalidDifferential {
                    page: input.r,
                    reason: format!("pages run from 2 to {n}"),
                });
            }
            if by_page.insert(input.r, input).is_some() {
                return Err(Error::InvalidDifferential {
                    page: input.r,
                    reason: "page given twice".into(),
                });
            }
        }
        Self::run_with(e2, |page| match by_page.get(&page.r()) {
            Some(input) => differential_from_input(page, input),
            None => Ok((page.clone(), Differential::zero(page))),
        })
    }

    /// Runs every page, asking `choose` for a (possibly rebased) page and its
    /// differential. Each differential is validated before the page turns.
    pub fn run_with<F>(e2: E2Algebra, mut choose: F) -> Result<Self>
    where
        F: FnMut(&Page) -> Result<(Page, Differential)>,
    {
        let n = e2.dimension();
        let e2 = Arc::new(e2);
        let mut pages = Vec::new();
        let mut differentials = Vec::new();
        let mut current = Page::initial(e2.clone());
        for _ in 2..=n.max(1) {
            if current.r() > n {
                break;
            }
            let (page, d) = choose(&current)?;
            d.validate(&page)?;
            let next = page.turn(&d)?;
            pages.push(page);
            differentials.push(d);
            current = next;
        }
        pages.push(current);
        Ok(SpectralSequence {
            e2,
            pages,
            differentials,
        })
    }

    pub fn e2(&self) -> &Arc<E2Algebra> {
        &self.e2
    }

    /// `E_r` for `2 <= r <= n + 1`; later pages equal `E_{n+1}`.
    pub fn page(&self, r: u32) -> &Page {
        let i = (r.max(2) - 2) as usize;
        &self.pages[i.min(self.pages.len() - 1)]
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    pub fn e_infinity(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    /// `d_r`; the zero differential on pages past `n`.
    pub fn differential(&self, r: u32) -> Differential {
        let i = (r.max(2) - 2) as usize;
        match self.differentials.get(i) {
            Some(d) => d.clone(),
            None => Differential::zero(self.page(r)),
        }
    }

    pub fn differentials(&self) -> &[Differential] {
        &self.differentials
    }
}

/// Rebases the page so the keyed elements are generators and builds the
/// differential from the images.
pub fn differential_from_input(page: &Page, input: &DifferentialInput) -> Result<(Page, Differential)> {
    let e2 = page.e2().clone();
    let r = page.r();
    let invalid = |reason: String| Error::InvalidDifferential { page: r, reason };
    let mut keys = Vec::new();
    let mut values = Vec::new();
    for (k, v) in &input.images {
        let key = e2.parse(k).map_err(|e| invalid(e.to_string()))?;
        let value = e2.parse(v).map_err(|e| invalid(e.to_string()))?;
        let entry = page
            .entry(key.bideg)
            .ok_or_else(|| invalid(format!("'{k}' lies outside the page")))?;
        if !entry.cycles.contains(&key.coords) {
            return Err(invalid(format!("'{k}' is not a cycle on E_{r}")));
        }
        if entry.is_boundary(&key.coords) {
            return Err(invalid(format!("'{k}' is zero on E_{r}")));
        }
        let expected = key.bideg.shifted(r);
        if value.bideg != expected && !value.is_zero() {
            return Err(invalid(format!(
                "d_{r}('{k}') = '{v}' has bidegree {}, expected {expected}",
                value.bideg
            )));
        }
        keys.push(key);
        values.push(value);
    }
    let rebased = page.rebased(&keys);
    let mut gens = HashMap::new();
    for ((key, value), (k, _)) in keys.iter().zip(&values).zip(&input.images) {
        let entry = rebased.entry(key.bideg).expect("checked above");
        let i = entry
            .basis
            .iter()
            .position(|x| x.kind == BasisKind::Generator && x.rep.coords == key.coords)
            .ok_or_else(|| invalid(format!("'{k}' is decomposable on E_{r}; give images on generators")))?;
        let tb = key.bideg.shifted(r);
        if let Some(zero) = e2.zero(tb) {
            let img = if value.bideg == tb { value.clone() } else { zero };
            gens.insert((key.bideg, i), img);
        }
    }
    let d = Differential::from_generator_images(&rebased, &gens);
    Ok((rebased, d))
}

#[cfg(test)]
mod tests;
