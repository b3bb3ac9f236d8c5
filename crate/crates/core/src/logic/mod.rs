//! Propositional formulas over a finite signature and their model sets.
//!
//! Everything here is semantic: formulas are compared through the exact set
//! of valuations that satisfy them, obtained by enumerating all `2^n`
//! valuations of the signature.

mod formula;
mod models;
mod parser;
mod signature;

pub use formula::Formula;
pub use models::{ModelSet, Valuation};
pub use parser::parse_formula;
pub use signature::{Signature, DEFAULT_ATOM_CAP};
pub(crate) use signature::is_atom_name;

use crate::error::{Error, Result};

/// The valuations of `sig` satisfying `f`.
pub fn models(f: &Formula, sig: &Signature) -> Result<ModelSet> {
    sig.check_cap()?;
    if let Some(max) = f.max_atom() {
        if max >= sig.len() {
            return Err(Error::UndeclaredAtom(format!("#{max}")));
        }
    }
    let width = sig.len();
    let mut set = ModelSet::empty(width);
    for bits in 0..(1u32 << width) {
        let v = Valuation::new(bits, width);
        if f.eval(v) {
            set.insert(v);
        }
    }
    Ok(set)
}

/// Joint model set of a list of formulas; the universe for an empty list.
pub fn joint_models(gamma: &[Formula], sig: &Signature) -> Result<ModelSet> {
    sig.check_cap()?;
    let mut set = ModelSet::universe(sig.len());
    for f in gamma {
        set.intersect_with(&models(f, sig)?);
    }
    Ok(set)
}

/// `gamma ⊨ phi`: every joint model of `gamma` satisfies `phi`.
pub fn entails(gamma: &[Formula], phi: &Formula, sig: &Signature) -> Result<bool> {
    Ok(joint_models(gamma, sig)?.is_subset(&models(phi, sig)?))
}

pub fn is_consistent(gamma: &[Formula], sig: &Signature) -> Result<bool> {
    Ok(!joint_models(gamma, sig)?.is_empty())
}

/// `alpha` is strictly more specific than `beta`: `M(alpha) ⊊ M(beta)`.
pub fn strictly_more_specific(alpha: &Formula, beta: &Formula, sig: &Signature) -> Result<bool> {
    Ok(models(alpha, sig)?.is_strict_subset(&models(beta, sig)?))
}
