//! Exact computations behind closed-geodesic existence criteria.
//!
//! The crate classifies finite-type graded algebras and Hopf algebras over
//! prime fields (generator counts, growth, depth, Gorenstein property,
//! ellipticity), runs a truncated multiplicative spectral-sequence engine for
//! string homology, and derives geodesic verdicts for a catalog of manifolds.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod field;
pub mod format;
pub mod homalg;
pub mod linalg;
pub mod logic;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{Characteristic, Fp, Prime};
pub use logic::Truth;
pub use series::{ExponentWitness, GrowthClass, GrowthTag, PoincareSeries};
