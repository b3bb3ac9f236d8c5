//! Defaults as attackable objects, default theories, and the valid defaults
//! at a point.

mod format;
mod rule;
mod theory;
mod validity;

pub use format::{format_rule, format_theory, parse_theory};
pub use rule::{DefaultRule, Polarity, Provenance};
pub use theory::{ConsistencyReport, DefaultTheory, InheritanceBlock, SpecificityOrder, Violation};
pub use validity::{Phase, ValidityResult, CLASSICAL_BLOCK};
