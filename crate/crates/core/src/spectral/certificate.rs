//! Survival of central powers through the pages.

use std::collections::BTreeSet;

use serde::Serialize;

use super::e2::BiElem;
use super::page::EntryStatus;
use super::SpectralSequence;
use crate::algebra::center::is_graded_central;
use crate::algebra::finite::Elem;
use crate::error::{Error, Result};
use crate::field::Prime;

/// `p^m` where `m` counts the pages `r in [2, n]` whose differential can hit
/// a nonzero column `H^r(M)` from `E^{0,*}`.
pub fn survival_exponent(p: Prime, n: u32, nonzero_degrees: &BTreeSet<u32>) -> u64 {
    p.get().pow(acting_pages(n, nonzero_degrees))
}

/// The `m` of [`survival_exponent`].
pub fn acting_pages(n: u32, nonzero_degrees: &BTreeSet<u32>) -> u32 {
    nonzero_degrees.iter().filter(|&&r| (2..=n).contains(&r)).count() as u32
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageWitness {
    pub page: u32,
    /// Exponent `e` of `x^e` entering the page.
    pub exponent: u64,
    /// `d_r(x^e)` is zero on `E_r`.
    pub cycle: bool,
    /// When not a cycle, `x^{ep}` was formed and `d_r(x^{ep}) = 0` verified.
    pub raised: bool,
    pub formatted_differential: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurvivalCertificate {
    pub element: String,
    pub degree: u32,
    pub start_page: u32,
    pub exponent: u64,
    pub bound: u64,
    pub pages: Vec<PageWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CertificateOutcome {
    Certified(SurvivalCertificate),
    /// A power lies above the truncation, or near enough to it that its
    /// entry or the target of its differential is Indeterminate.
    Indeterminate {
        page: u32,
        required_truncation: u32,
        sufficient_truncation: u32,
    },
}

/// Follows `x` through the pages, replacing it by its `p`-th power whenever a
/// differential is nonzero on it. `x` must be an even-degree element of
/// `E_2^{0,*}` that is graded-central in the loop homology.
pub fn certify_central_power(ss: &SpectralSequence, x: &BiElem) -> Result<CertificateOutcome> {
    let e2 = ss.e2();
    let p = e2.prime();
    let label = e2.format(x);
    if x.bideg.col != 0 || x.bideg.t == 0 {
        return Err(Error::NotEffectiveCentral(format!("{label} does not lie in E^{{0,t}} with t > 0")));
    }
    if x.bideg.t % 2 == 1 {
        return Err(Error::NotEffectiveCentral(format!(
            "{label} has odd degree; use its square"
        )));
    }
    check_central(ss, x, &label)?;
    let n = e2.dimension();
    let degrees: BTreeSet<u32> = {
        let coeffs = e2.cohomology().poincare_series().coefficients_u64(n as usize);
        (0..=n).filter(|&d| coeffs[d as usize] > 0).collect()
    };
    let bound = survival_exponent(p, n, &degrees);
    let sufficient = x.bideg.t.saturating_mul(bound as u32) + n;
    let unknown = |y: &BiElem, r: u32| {
        let page = ss.page(r);
        [y.bideg, y.bideg.shifted(r)]
            .iter()
            .any(|&b| page.status(b) == EntryStatus::Indeterminate)
    };
    let mut y = x.clone();
    let mut exponent = 1u64;
    let mut pages = Vec::new();
    for r in 2..=n {
        let page = ss.page(r);
        let d = ss.differential(r);
        if unknown(&y, r) {
            return Ok(CertificateOutcome::Indeterminate {
                page: r,
                required_truncation: y.bideg.t + r,
                sufficient_truncation: sufficient,
            });
        }
        let dy = d.apply(page, &y)?;
        let cycle = dy.as_ref().map_or(true, |v| page.is_zero_class(v));
        let formatted_differential = dy.as_ref().map_or("0".into(), |v| e2.format(v));
        if cycle {
            pages.push(PageWitness {
                page: r,
                exponent,
                cycle,
                raised: false,
                formatted_differential,
            });
            continue;
        }
        let required = y.bideg.t * p.get() as u32 + r;
        let power = match e2.power(&y, p.get()) {
            Some(power) if !unknown(&power, r) => power,
            _ => {
                return Ok(CertificateOutcome::Indeterminate {
                    page: r,
                    required_truncation: required,
                    sufficient_truncation: sufficient,
                })
            }
        };
        let d_power = d.apply(page, &power)?;
        if d_power.as_ref().is_some_and(|v| !page.is_zero_class(v)) {
            return Err(Error::InconsistentPage(format!(
                "d_{r} of the {p}-th power of {} is nonzero; the differential is not a derivation",
                e2.format(&y)
            )));
        }
        pages.push(PageWitness {
            page: r,
            exponent,
            cycle,
            raised: true,
            formatted_differential,
        });
        y = power;
        exponent *= p.get();
    }
    debug_assert!(exponent <= bound);
    Ok(CertificateOutcome::Certified(SurvivalCertificate {
        element: label,
        degree: x.bideg.t,
        start_page: 2,
        exponent,
        bound,
        pages,
    }))
}

fn check_central(ss: &SpectralSequence, x: &BiElem, label: &str) -> Result<()> {
    let e2 = ss.e2();
    let loop_h = e2.loop_homology();
    let maxgen = loop_h.factors().iter().map(|f| f.degree).max().unwrap_or(0);
    let fp = loop_h.to_finite(x.bideg.t + maxgen)?;
    let mut acc: Option<Elem> = fp.zero(x.bideg.t);
    for (i, &c) in x.coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (_, lm) = e2.basis_monomial(x.bideg, i);
        let m = fp.mono_elem(lm, false).expect("inside cutoff");
        acc = acc.map(|a| fp.add_scaled(&a, &m, c));
    }
    let z = acc.expect("inside cutoff");
    match is_graded_central(&fp, &z) {
        Some(true) => Ok(()),
        _ => Err(Error::NotEffectiveCentral(format!("{label} is not graded-central in the loop homology"))),
    }
}
