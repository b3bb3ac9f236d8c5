//! Semantic default reasoning over finite propositional signatures.
//!
//! The pipeline runs from formulas and model sets ([`logic`]) through default
//! theories and their valid defaults at a point ([`defaults`]), the hierarchy
//! of relevant sets built from where defaults are attached ([`hierarchy`]),
//! to the preferential order on models and the queries answered from it
//! ([`preference`]). [`inconsistency`] finds minimal inconsistent subsets of
//! argument units and is shared with the session protocol.

pub mod defaults;
pub mod error;
pub mod hierarchy;
pub mod inconsistency;
pub mod logic;
pub mod preference;
pub mod size;

pub use defaults::{DefaultRule, DefaultTheory};
pub use error::{Error, Result};
pub use logic::{Formula, ModelSet, Signature, Valuation};

use num_rational::Ratio;

/// Size thresholds in floating point, as stored in a [`DefaultTheory`].
pub type SizePolicyF64 = size::SizePolicy<f64>;
/// Size thresholds in exact rationals.
pub type ExactSizePolicy = size::SizePolicy<Ratio<i64>>;
/// Size gate report in exact rationals.
pub type ExactSizeReport = size::SizeReport<Ratio<i64>>;
