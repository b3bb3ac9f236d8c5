//! Visible and valid defaults at a point.
//!
//! A positive default `α ∼ φ` contributes `α ∧ φ` to conflict detection. A
//! negated default `α ≁ φ` contributes no conclusion of its own; it clashes
//! when `α ∧ ¬φ` is impossible together with the positive defaults of the set
//! whose scope contains `α` (the defaults it cancels) and the base.

use std::collections::BTreeSet;

use serde::Serialize;

use super::theory::DefaultTheory;
use crate::error::{Error, Result};
use crate::inconsistency::minimal_subsets;
use crate::logic::{Formula, ModelSet};

/// Label of the classical block `B ∪ {β}` in reported conflicts.
pub const CLASSICAL_BLOCK: &str = "classical";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    /// Conflict involving the classical information at the point.
    #[serde(rename = "classical-phase")]
    Classical,
    /// Conflict among defaults only.
    #[serde(rename = "default-phase")]
    Default,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Classical => "classical-phase",
            Phase::Default => "default-phase",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityResult {
    /// The point `β`, printed.
    pub point: String,
    pub visible: BTreeSet<String>,
    pub eliminated: Vec<(String, Phase)>,
    pub valid: BTreeSet<String>,
    /// Minimal conflicts that contain the classical block.
    pub classical_conflicts: Vec<Vec<String>>,
    /// Minimal conflicts among the defaults that survived the first phase.
    pub default_conflicts: Vec<Vec<String>>,
}

/// Index-level result, used by the preference construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct ValidIndices {
    pub visible: Vec<usize>,
    pub eliminated: Vec<(usize, Phase)>,
    pub valid: Vec<usize>,
    pub classical_conflicts: Vec<Vec<usize>>,
    pub default_conflicts: Vec<Vec<usize>>,
}

impl DefaultTheory {
    fn point_models(&self, beta: &Formula) -> Result<ModelSet> {
        let point = self.restrict(beta)?;
        if point.is_empty() {
            return Err(Error::UnsatisfiablePoint(beta.to_text(self.signature())));
        }
        Ok(point)
    }

    /// Defaults whose scope is entailed by `β` (modulo the background),
    /// minus those blocked at a formula `β` entails.
    pub fn visible_defaults(&self, beta: &Formula) -> Result<BTreeSet<String>> {
        let point = self.point_models(beta)?;
        Ok(self.ids(&self.visible_at(&point)))
    }

    /// Two-phase elimination of the weakest defaults from every minimal
    /// conflict: first conflicts with the classical information at `β`, then
    /// conflicts among the surviving defaults.
    pub fn valid_defaults(&self, beta: &Formula) -> Result<ValidityResult> {
        let point = self.point_models(beta)?;
        let r = self.valid_at(&point)?;
        let name = |i: usize| self.defaults()[i].id.clone();
        let conflicts = |sets: &[Vec<usize>]| -> Vec<Vec<String>> {
            sets.iter()
                .map(|s| {
                    let mut ids: Vec<String> = s
                        .iter()
                        .map(|&i| {
                            if i == usize::MAX {
                                CLASSICAL_BLOCK.to_string()
                            } else {
                                name(i)
                            }
                        })
                        .collect();
                    ids.sort();
                    ids
                })
                .collect()
        };
        Ok(ValidityResult {
            point: beta.to_text(self.signature()),
            visible: self.ids(&r.visible),
            eliminated: r.eliminated.iter().map(|&(i, p)| (name(i), p)).collect(),
            valid: self.ids(&r.valid),
            classical_conflicts: conflicts(&r.classical_conflicts),
            default_conflicts: conflicts(&r.default_conflicts),
        })
    }

    fn ids(&self, indices: &[usize]) -> BTreeSet<String> {
        indices.iter().map(|&i| self.defaults()[i].id.clone()).collect()
    }

    pub(crate) fn visible_at(&self, point: &ModelSet) -> Vec<usize> {
        (0..self.defaults().len())
            .filter(|&i| point.is_subset(self.scope_models(i)))
            .filter(|&i| {
                let id = &self.defaults()[i].id;
                !self
                    .blocks()
                    .iter()
                    .any(|b| &b.default_id == id && point.is_subset(b.models()))
            })
            .collect()
    }

    /// Joint consistency of a set of defaults over `base`.
    pub(crate) fn defaults_consistent(&self, base: &ModelSet, members: &[usize]) -> bool {
        let defaults = self.defaults();
        let mut joint = base.clone();
        for &i in members.iter().filter(|&&i| !defaults[i].is_negated()) {
            joint.intersect_with(&self.check_content(i));
        }
        if joint.is_empty() {
            return false;
        }
        members
            .iter()
            .filter(|&&n| defaults[n].is_negated())
            .all(|&n| {
                let mut cancel = base.intersection(&self.check_content(n));
                for &p in members.iter().filter(|&&p| !defaults[p].is_negated()) {
                    if self.scope_models(n).is_subset(self.scope_models(p)) {
                        cancel.intersect_with(&self.check_content(p));
                    }
                }
                !cancel.is_empty()
            })
    }

    /// Defaults in `set` that are not stronger than any other default in it.
    fn weakest(&self, set: &[usize]) -> Vec<usize> {
        set.iter()
            .copied()
            .filter(|&d| !set.iter().any(|&e| e != d && self.stronger(d, e)))
            .collect()
    }

    pub(crate) fn valid_at(&self, point: &ModelSet) -> Result<ValidIndices> {
        let visible = self.visible_at(point);
        if visible.len() > self.unit_cap() {
            return Err(Error::TooManyUnits {
                units: visible.len(),
                cap: self.unit_cap(),
            });
        }
        let everything = ModelSet::universe(self.signature().len());

        // Unit 0 is the classical block; unit k > 0 is visible[k - 1].
        let classical: Vec<Vec<usize>> = minimal_subsets(visible.len() + 1, |units| {
            let (base, rest) = match units.first() {
                Some(0) => (point, &units[1..]),
                _ => (&everything, units),
            };
            let members: Vec<usize> = rest.iter().map(|&k| visible[k - 1]).collect();
            !self.defaults_consistent(base, &members)
        })
        .into_iter()
        .filter(|s| s.first() == Some(&0))
        .map(|s| s[1..].iter().map(|&k| visible[k - 1]).collect())
        .collect();

        let mut eliminated = Vec::new();
        let mut gone = BTreeSet::new();
        for set in &classical {
            for d in self.weakest(set) {
                if gone.insert(d) {
                    eliminated.push((d, Phase::Classical));
                }
            }
        }

        let survivors: Vec<usize> = visible.iter().copied().filter(|d| !gone.contains(d)).collect();
        let default_conflicts: Vec<Vec<usize>> = minimal_subsets(survivors.len(), |picked| {
            let members: Vec<usize> = picked.iter().map(|&k| survivors[k]).collect();
            !self.defaults_consistent(&everything, &members)
        })
        .into_iter()
        .map(|s| s.iter().map(|&k| survivors[k]).collect())
        .collect();
        for set in &default_conflicts {
            for d in self.weakest(set) {
                if gone.insert(d) {
                    eliminated.push((d, Phase::Default));
                }
            }
        }
        eliminated.sort_by_key(|e| e.0);

        let valid = visible.iter().copied().filter(|d| !gone.contains(d)).collect();
        let tag = |sets: Vec<Vec<usize>>, with_block: bool| -> Vec<Vec<usize>> {
            sets.into_iter()
                .map(|mut s| {
                    if with_block {
                        s.insert(0, usize::MAX);
                    }
                    s
                })
                .collect()
        };
        Ok(ValidIndices {
            visible,
            eliminated,
            valid,
            classical_conflicts: tag(classical, true),
            default_conflicts: tag(default_conflicts, false),
        })
    }
}
