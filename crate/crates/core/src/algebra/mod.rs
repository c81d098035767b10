//! Presentations of connected graded algebras over prime fields.

pub mod center;
pub mod expr;
pub mod finite;
pub mod lcs;
pub mod monomial;
pub mod random;
pub mod structured;

pub use center::{effective_center, graded_center, CentralPower, EffectiveCenter, GradedCenter};
pub use finite::{Elem, FiniteGenerator, FinitePresentation, MultiplicationRule};
pub use lcs::{lower_central_series, LowerCentralSeries, Nilpotency};
pub use structured::{AlgebraPresentation, FactorKind, MonogenicFactor, SignRule};
