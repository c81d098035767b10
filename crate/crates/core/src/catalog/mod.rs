//! Space records and the geodesic verdict pipeline.

mod builtin;
mod verdict;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use builtin::{builtin_catalog, builtin_catalog_with, lookup, CatalogBounds, LookupError};
pub use verdict::{verdict, verdicts, Citation, Conclusion, Fact, Rule, Step, UnknownReason, Verdict};

use crate::algebra::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::field::{Characteristic, Prime};

/// Data known for one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeData {
    pub cohomology: Option<AlgebraPresentation>,
    pub loop_homology: Option<AlgebraPresentation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceRecord {
    pub name: String,
    /// `None` when the source gives no dimension.
    pub dimension: Option<u32>,
    pub simply_connected: bool,
    /// Closed oriented manifold: top cohomology is one-dimensional in degree `n`.
    pub closed_manifold: bool,
    /// Quotient of a simply connected compact Lie group by a connected closed
    /// subgroup. Such spaces are `F_p`-elliptic at every prime.
    pub homogeneous: bool,
    /// Characteristic-zero surrogate; only factor kinds are used.
    pub rational_cohomology: Option<AlgebraPresentation>,
    pub mod_p: BTreeMap<Prime, PrimeData>,
    pub notes: Vec<String>,
}

impl SpaceRecord {
    pub fn new(name: impl Into<String>, dimension: Option<u32>) -> Self {
        SpaceRecord {
            name: name.into(),
            dimension,
            simply_connected: true,
            closed_manifold: true,
            homogeneous: false,
            rational_cohomology: None,
            mod_p: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn has_mod_p_data(&self) -> bool {
        self.mod_p
            .values()
            .any(|d| d.cohomology.is_some() || d.loop_homology.is_some())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidRecord(format!("{}: {msg}", self.name)));
        if self.name.trim().is_empty() {
            return bad("empty name".into());
        }
        let has_cohomology = self.rational_cohomology.is_some() || self.mod_p.values().any(|d| d.cohomology.is_some());
        if has_cohomology && self.dimension.is_none() {
            return bad("cohomology data needs a dimension".into());
        }
        if let Some(h) = &self.rational_cohomology {
            if h.characteristic() != Characteristic::Zero {
                return bad("rational cohomology must be given in characteristic 0".into());
            }
            self.check_cohomology(h, "rational cohomology")?;
        }
        for (p, data) in &self.mod_p {
            let want = Characteristic::Prime(*p);
            if let Some(h) = &data.cohomology {
                if h.characteristic() != want {
                    return bad(format!("cohomology at p = {p} is over {}", h.characteristic()));
                }
                self.check_cohomology(h, &format!("cohomology at p = {p}"))?;
            }
            if let Some(l) = &data.loop_homology {
                if l.characteristic() != want {
                    return bad(format!("loop homology at p = {p} is over {}", l.characteristic()));
                }
                if l.factors().iter().any(|f| f.degree == 0) {
                    return bad("loop homology must be connected".into());
                }
            }
        }
        Ok(())
    }

    fn check_cohomology(&self, h: &AlgebraPresentation, what: &str) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidRecord(format!("{}: {what}: {msg}", self.name)));
        let n = self.dimension.expect("checked by caller");
        let series = h.poincare_series();
        let Some(top) = series.top_degree() else {
            return bad("cohomology of a finite complex is finite-dimensional".into());
        };
        if top > n as u64 {
            return bad(format!("nonzero in degree {top} above the dimension {n}"));
        }
        let dims = series.coefficients_u64(n as usize);
        if self.closed_manifold && (top != n as u64 || dims[n as usize] != 1) {
            return bad(format!("top class of a closed oriented {n}-manifold must span degree {n}"));
        }
        if self.simply_connected {
            for d in [1, n.saturating_sub(1)] {
                if d >= 1 && d < n && dims[d as usize] != 0 {
                    return bad(format!("degree {d} is nonzero but the space is simply connected"));
                }
            }
        }
        Ok(())
    }
}
