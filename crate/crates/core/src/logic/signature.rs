use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of atoms that [`models`](super::models) will enumerate.
pub const DEFAULT_ATOM_CAP: usize = 20;

/// Ordered, duplicate-free list of propositional atoms.
///
/// The position of an atom fixes its bit in every [`Valuation`](super::Valuation):
/// the first atom is the most significant bit, so valuations print as
/// bitstrings in declaration order.
#[derive(Clone, PartialEq, Eq)]
pub struct Signature {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
    cap: usize,
}

impl Signature {
    pub fn new<I, S>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = Vec::new();
        let mut index = HashMap::new();
        for atom in atoms {
            let atom = atom.into();
            if !is_atom_name(&atom) || is_reserved(&atom) {
                return Err(Error::InvalidAtomName(atom));
            }
            if index.insert(atom.clone(), names.len()).is_some() {
                return Err(Error::DuplicateAtom(atom));
            }
            names.push(atom);
        }
        Ok(Signature {
            atoms: names,
            index,
            cap: DEFAULT_ATOM_CAP,
        })
    }

    /// Replaces the enumeration cap. Values above 26 are clamped, since model
    /// sets are materialized as dense bitsets.
    pub fn with_atom_cap(mut self, cap: usize) -> Self {
        self.cap = cap.min(26);
        self
    }

    pub fn atom_cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn position(&self, atom: &str) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn name(&self, position: usize) -> &str {
        &self.atoms[position]
    }

    /// Errors when enumeration over this signature would exceed the cap.
    pub fn check_cap(&self) -> Result<()> {
        if self.atoms.len() > self.cap {
            return Err(Error::SignatureTooLarge {
                atoms: self.atoms.len(),
                cap: self.cap,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.atoms).finish()
    }
}

pub(crate) fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn is_reserved(s: &str) -> bool {
    matches!(s, "true" | "false")
}
