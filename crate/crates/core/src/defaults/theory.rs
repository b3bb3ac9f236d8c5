use std::collections::BTreeSet;

use serde::Serialize;

use super::rule::DefaultRule;
use crate::error::{Error, Result};
use crate::inconsistency::DEFAULT_UNIT_CAP;
use crate::logic::{joint_models, models, Formula, ModelSet, Signature};
use crate::size::{check_size_gate, Fraction, Measure, SizePolicy, SizeReport, SizeSets};

/// Relation deciding which of two conflicting defaults is stronger during
/// elimination.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SpecificityOrder {
    /// A default is stronger when its scope is a strict subset of the other
    /// default's scope (modulo the background theory).
    #[default]
    ScopeInclusion,
    /// Explicit `(stronger, weaker)` pairs by default id, closed under
    /// transitivity. Must be acyclic.
    Explicit(Vec<(String, String)>),
}

/// Compiled model sets of one default.
#[derive(Debug, Clone)]
pub(crate) struct CompiledDefault {
    /// `M(α)` over all valuations.
    pub scope_full: ModelSet,
    /// `M(α) ∩ M(B)`.
    pub scope: ModelSet,
    /// `M(φ)` over all valuations.
    pub conclusion: ModelSet,
    pub exceptions: Vec<ModelSet>,
}

#[derive(Debug, Clone)]
pub struct InheritanceBlock {
    pub default_id: String,
    pub at: Formula,
    pub(crate) models: ModelSet,
}

impl InheritanceBlock {
    /// `M(at) ∩ M(B)`.
    pub fn models(&self) -> &ModelSet {
        &self.models
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// The background theory has no model.
    InconsistentBackground,
    /// The defaults attached to one scope, read as `α ∧ φ` (or `α ∧ ¬φ` for
    /// negated defaults), have no common model with the background.
    InconsistentAttachment { scope: String, defaults: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ConsistencyReport {
    pub violations: Vec<Violation>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A background theory `B` together with the defaults attached to formulas
/// and any explicit inheritance blocks. Values are immutable: [`attach`] and
/// [`block_inheritance`] return extended copies.
///
/// [`attach`]: DefaultTheory::attach
/// [`block_inheritance`]: DefaultTheory::block_inheritance
#[derive(Debug, Clone)]
pub struct DefaultTheory {
    signature: Signature,
    background: Vec<Formula>,
    universe: ModelSet,
    defaults: Vec<DefaultRule>,
    pub(crate) compiled: Vec<CompiledDefault>,
    blocks: Vec<InheritanceBlock>,
    policy: SizePolicy<f64>,
    specificity: SpecificityOrder,
    unit_cap: usize,
}

impl DefaultTheory {
    pub fn new(signature: Signature, background: Vec<Formula>) -> Result<Self> {
        let universe = joint_models(&background, &signature)?;
        Ok(DefaultTheory {
            signature,
            background,
            universe,
            defaults: Vec::new(),
            compiled: Vec::new(),
            blocks: Vec::new(),
            policy: SizePolicy::standard(),
            specificity: SpecificityOrder::default(),
            unit_cap: DEFAULT_UNIT_CAP,
        })
    }

    pub fn with_policy(mut self, policy: SizePolicy<f64>) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_specificity(mut self, order: SpecificityOrder) -> Self {
        self.specificity = order;
        self
    }

    /// Cap on the number of visible defaults searched for conflicts.
    pub fn with_unit_cap(mut self, cap: usize) -> Self {
        self.unit_cap = cap;
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn background(&self) -> &[Formula] {
        &self.background
    }

    /// `M(B)`: the valuations the background theory allows.
    pub fn universe(&self) -> &ModelSet {
        &self.universe
    }

    pub fn defaults(&self) -> &[DefaultRule] {
        &self.defaults
    }

    pub fn blocks(&self) -> &[InheritanceBlock] {
        &self.blocks
    }

    pub fn policy(&self) -> &SizePolicy<f64> {
        &self.policy
    }

    pub fn specificity(&self) -> &SpecificityOrder {
        &self.specificity
    }

    pub(crate) fn unit_cap(&self) -> usize {
        self.unit_cap
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.defaults.iter().position(|d| d.id == id)
    }

    pub fn default(&self, id: &str) -> Option<&DefaultRule> {
        self.defaults.iter().find(|d| d.id == id)
    }

    /// `M(α) ∩ M(B)` for the default at `index`.
    pub fn scope_models(&self, index: usize) -> &ModelSet {
        &self.compiled[index].scope
    }

    /// `M(φ)` for the default at `index`.
    pub fn conclusion_models(&self, index: usize) -> &ModelSet {
        &self.compiled[index].conclusion
    }

    /// Models of `f` inside the universe.
    pub fn restrict(&self, f: &Formula) -> Result<ModelSet> {
        Ok(models(f, &self.signature)?.intersection(&self.universe))
    }

    /// Attaches `rule` to its scope.
    pub fn attach(&self, rule: DefaultRule) -> Result<Self> {
        if self.index_of(&rule.id).is_some() {
            return Err(Error::DuplicateDefault(rule.id));
        }
        let scope_full = models(&rule.scope, &self.signature)?;
        let scope = scope_full.intersection(&self.universe);
        if scope.is_empty() {
            return Err(Error::UnsatisfiableScope(rule.id));
        }
        let mut exceptions = Vec::with_capacity(rule.exceptions.len());
        for e in &rule.exceptions {
            let set = self.restrict(e)?;
            if !set.is_subset(&scope) {
                return Err(Error::ExceptionOutsideScope {
                    id: rule.id.clone(),
                    exception: e.to_text(&self.signature),
                });
            }
            exceptions.push(set);
        }
        if !(0.0..=1.0).contains(&rule.surprise_budget)
            || rule.surprise_budget > self.policy.very_small
        {
            return Err(Error::SurpriseBudget {
                id: rule.id.clone(),
                budget: rule.surprise_budget,
                bound: self.policy.very_small,
            });
        }
        let conclusion = models(&rule.conclusion, &self.signature)?;
        let mut next = self.clone();
        next.compiled.push(CompiledDefault {
            scope_full,
            scope,
            conclusion,
            exceptions,
        });
        next.defaults.push(rule);
        Ok(next)
    }

    /// Stops downward inheritance of `default_id` into `subset`, which must
    /// lie inside the default's scope.
    pub fn block_inheritance(&self, default_id: &str, subset: Formula) -> Result<Self> {
        let index = self
            .index_of(default_id)
            .ok_or_else(|| Error::UnknownDefault(default_id.to_string()))?;
        let set = self.restrict(&subset)?;
        if !set.is_subset(&self.compiled[index].scope) {
            return Err(Error::BlockOutsideScope {
                id: default_id.to_string(),
            });
        }
        let mut next = self.clone();
        next.blocks.push(InheritanceBlock {
            default_id: default_id.to_string(),
            at: subset,
            models: set,
        });
        Ok(next)
    }

    /// Model set a default contributes to a consistency check: `α ∧ φ`, or
    /// `α ∧ ¬φ` for a negated default.
    pub(crate) fn check_content(&self, index: usize) -> ModelSet {
        let c = &self.compiled[index];
        if self.defaults[index].is_negated() {
            c.scope_full.difference(&c.conclusion)
        } else {
            c.scope_full.intersection(&c.conclusion)
        }
    }

    /// The background must be consistent, and the defaults attached to each
    /// scope must be jointly consistent with it.
    pub fn check_consistency_conditions(&self) -> ConsistencyReport {
        let mut report = ConsistencyReport::default();
        if self.universe.is_empty() {
            report.violations.push(Violation::InconsistentBackground);
            return report;
        }
        let mut seen: Vec<&ModelSet> = Vec::new();
        for (i, c) in self.compiled.iter().enumerate() {
            if seen.contains(&&c.scope) {
                continue;
            }
            seen.push(&c.scope);
            let group: Vec<usize> = (i..self.compiled.len())
                .filter(|&j| self.compiled[j].scope == c.scope)
                .collect();
            let mut joint = self.universe.clone();
            for &j in &group {
                joint.intersect_with(&self.check_content(j));
            }
            if joint.is_empty() {
                report.violations.push(Violation::InconsistentAttachment {
                    scope: self.defaults[i].scope.to_text(&self.signature),
                    defaults: group.iter().map(|&j| self.defaults[j].id.clone()).collect(),
                });
            }
        }
        report
    }

    /// Size gate for one default under the given measure and policy. For a
    /// negated default the gate only requires `X ∩ ¬Y` to be non-empty.
    pub fn check_size_gate<S: Fraction>(
        &self,
        id: &str,
        measure: &Measure<S>,
        policy: &SizePolicy<S>,
    ) -> Result<SizeReport<S>> {
        let index = self
            .index_of(id)
            .ok_or_else(|| Error::UnknownDefault(id.to_string()))?;
        let c = &self.compiled[index];
        if self.defaults[index].is_negated() {
            let denied = c.scope.difference(&c.conclusion);
            let lenient = SizePolicy {
                most: S::zero(),
                small: S::one(),
                very_small: S::one(),
            };
            return Ok(check_size_gate(
                SizeSets {
                    scope: &c.scope,
                    holds: &denied,
                    exceptions: &[],
                },
                measure,
                &lenient,
            ));
        }
        Ok(check_size_gate(
            SizeSets {
                scope: &c.scope,
                holds: &c.conclusion,
                exceptions: &c.exceptions,
            },
            measure,
            policy,
        ))
    }

    /// `stronger(i, j)`: default `i` beats default `j` in a conflict.
    pub(crate) fn stronger(&self, i: usize, j: usize) -> bool {
        match &self.specificity {
            SpecificityOrder::ScopeInclusion => {
                self.compiled[i].scope.is_strict_subset(&self.compiled[j].scope)
            }
            SpecificityOrder::Explicit(pairs) => {
                let (from, to) = (&self.defaults[i].id, &self.defaults[j].id);
                let mut frontier = vec![from.as_str()];
                let mut seen = BTreeSet::new();
                while let Some(cur) = frontier.pop() {
                    for (s, w) in pairs {
                        if s == cur && seen.insert(w.as_str()) {
                            if w == to {
                                return true;
                            }
                            frontier.push(w);
                        }
                    }
                }
                false
            }
        }
    }
}
