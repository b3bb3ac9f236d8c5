//! Carriers of move contents and the arbiter's joint-consistency test.
//!
//! Facts constrain the individual under discussion; classical rules
//! constrain the universe. A default `X ∼ Y` is classically consistent
//! with a set of rules iff some element of their universe lies in `X ∩ Y`
//! (`X − Y` for `X ≁ Y`). A set of units is consistent iff the rules and
//! facts have a joint element and every default in it is consistent with
//! the rules. Adding units only shrinks these intersections, so the test
//! is monotone.

use dialectic_core::defaults::DefaultRule;
use dialectic_core::inconsistency::JointConsistency;
use dialectic_core::logic::{joint_models, models, parse_formula, Formula, Signature};
use dialectic_core::size::SizePolicy;
use dialectic_core::DefaultTheory;
use fixedbitset::FixedBitSet;

use crate::error::{ProtocolError, Result};
use crate::moves::{Content, DefaultSpec};
use crate::session::Mode;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Domain {
    Signature {
        sig: Signature,
        background: Vec<Formula>,
        universe: FixedBitSet,
    },
    Elements(Vec<String>),
}

impl Default for Domain {
    fn default() -> Self {
        Domain::Elements(Vec::new())
    }
}

impl Domain {
    pub(crate) fn compile(mode: &Mode) -> Result<Self> {
        match mode {
            Mode::Intensional {
                atoms, background, ..
            } => {
                let sig = Signature::new(atoms.iter().cloned())?;
                let background = background
                    .iter()
                    .map(|text| parse_formula(text, &sig))
                    .collect::<Result<Vec<_>, _>>()?;
                let universe = joint_models(&background, &sig)?;
                if universe.is_empty() {
                    return Err(ProtocolError::Malformed("background is inconsistent".into()));
                }
                Ok(Domain::Signature {
                    universe: universe.as_bits().clone(),
                    sig,
                    background,
                })
            }
            Mode::Extensional { domain } => {
                let mut seen = std::collections::BTreeSet::new();
                for e in domain {
                    if !seen.insert(e) {
                        return Err(ProtocolError::Malformed(format!("duplicate element `{e}`")));
                    }
                }
                if domain.is_empty() {
                    return Err(ProtocolError::Malformed("element domain is empty".into()));
                }
                Ok(Domain::Elements(domain.clone()))
            }
        }
    }

    fn width(&self) -> usize {
        match self {
            Domain::Signature { sig, .. } => 1 << sig.len(),
            Domain::Elements(names) => names.len(),
        }
    }

    /// Everything the inviolable background allows.
    pub(crate) fn universe(&self) -> FixedBitSet {
        match self {
            Domain::Signature { universe, .. } => universe.clone(),
            Domain::Elements(names) => {
                let mut all = FixedBitSet::with_capacity(names.len());
                all.insert_range(..);
                all
            }
        }
    }

    pub(crate) fn complement(&self, set: &FixedBitSet) -> FixedBitSet {
        let mut out = set.clone();
        out.toggle_range(..);
        out
    }

    pub(crate) fn signature(&self) -> Result<&Signature> {
        match self {
            Domain::Signature { sig, .. } => Ok(sig),
            Domain::Elements(_) => Err(ProtocolError::NotIntensional),
        }
    }

    pub(crate) fn background(&self) -> &[Formula] {
        match self {
            Domain::Signature { background, .. } => background,
            Domain::Elements(_) => &[],
        }
    }

    pub(crate) fn formula(&self, text: &str) -> Result<Formula> {
        Ok(parse_formula(text, self.signature()?)?)
    }

    pub(crate) fn carrier(&self, content: &Content) -> Result<FixedBitSet> {
        match (self, content) {
            (Domain::Signature { sig, .. }, Content::Formula(text)) => {
                Ok(models(&parse_formula(text, sig)?, sig)?.as_bits().clone())
            }
            (Domain::Elements(names), Content::Elements(items)) => {
                let mut bits = FixedBitSet::with_capacity(names.len());
                for item in items {
                    let i = names.iter().position(|n| n == item).ok_or_else(|| {
                        ProtocolError::Malformed(format!("element `{item}` is not in the domain"))
                    })?;
                    bits.insert(i);
                }
                Ok(bits)
            }
            (Domain::Signature { .. }, Content::Elements(_)) => Err(ProtocolError::Malformed(
                "element sets need an extensional session".into(),
            )),
            (Domain::Elements(_), Content::Formula(_)) => Err(ProtocolError::Malformed(
                "formulas need an intensional session".into(),
            )),
        }
    }

    /// `X ∩ Y`, or `X − Y` for a negated default.
    pub(crate) fn default_carrier(&self, spec: &DefaultSpec) -> Result<FixedBitSet> {
        let mut scope = self.carrier(&spec.scope)?;
        let conclusion = self.carrier(&spec.conclusion)?;
        if spec.negated {
            scope.difference_with(&conclusion);
        } else {
            scope.intersect_with(&conclusion);
        }
        Ok(scope)
    }

    /// The set a default's conclusion component asserts.
    pub(crate) fn conclusion_carrier(&self, spec: &DefaultSpec) -> Result<FixedBitSet> {
        let c = self.carrier(&spec.conclusion)?;
        Ok(if spec.negated { self.complement(&c) } else { c })
    }

    /// Outside every declared exception set.
    pub(crate) fn outside_exceptions(&self, spec: &DefaultSpec) -> Result<FixedBitSet> {
        let mut union = FixedBitSet::with_capacity(self.width());
        for e in &spec.exceptions {
            union.union_with(&self.carrier(&Content::Formula(e.clone()))?);
        }
        Ok(self.complement(&union))
    }

    pub(crate) fn rule(&self, spec: &DefaultSpec, id: &str) -> Result<DefaultRule> {
        let (Content::Formula(scope), Content::Formula(conclusion)) = (&spec.scope, &spec.conclusion)
        else {
            return Err(ProtocolError::NotIntensional);
        };
        let mut rule = DefaultRule::new(id, self.formula(scope)?, self.formula(conclusion)?)
            .with_surprise(spec.surprise)
            .with_provenance(spec.provenance);
        for e in &spec.exceptions {
            rule = rule.with_exception(self.formula(e)?);
        }
        if spec.negated {
            rule = rule.negated();
        }
        if spec.homogeneous {
            rule = rule.homogeneous();
        }
        Ok(rule)
    }

    /// Structural checks on a default: in intensional sessions it must
    /// attach to the background theory and its blocks must lie in its
    /// scope; extensional defaults carry no exceptions or blocks.
    pub(crate) fn validate_default(
        &self,
        spec: &DefaultSpec,
        id: &str,
        policy: &SizePolicy<f64>,
    ) -> Result<()> {
        match self {
            Domain::Signature {
                sig, background, ..
            } => {
                let theory = DefaultTheory::new(sig.clone(), background.clone())?
                    .with_policy(*policy)
                    .attach(self.rule(spec, id)?)?;
                let mut t = theory;
                for b in &spec.blocks {
                    t = t.block_inheritance(id, self.formula(b)?)?;
                }
                Ok(())
            }
            Domain::Elements(_) => {
                self.carrier(&spec.scope)?;
                self.carrier(&spec.conclusion)?;
                if !spec.exceptions.is_empty() || !spec.blocks.is_empty() {
                    return Err(ProtocolError::Malformed(
                        "exceptions and blocks need an intensional session".into(),
                    ));
                }
                if !(0.0..=policy.very_small).contains(&spec.surprise) {
                    return Err(ProtocolError::Malformed(format!(
                        "surprise budget {} outside [0, {}]",
                        spec.surprise, policy.very_small
                    )));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum UnitRole {
    Fact,
    Rule,
    Default,
}

#[derive(Debug, Clone)]
pub(crate) struct Unit {
    pub id: String,
    pub role: UnitRole,
    pub carrier: FixedBitSet,
}

/// The committed assertive contents as seen by the arbiter.
pub(crate) struct ArbiterFamily {
    pub universe: FixedBitSet,
    pub units: Vec<Unit>,
}

impl JointConsistency for ArbiterFamily {
    fn unit_count(&self) -> usize {
        self.units.len()
    }

    fn unit_id(&self, index: usize) -> &str {
        &self.units[index].id
    }

    fn is_consistent(&self, members: &[usize]) -> bool {
        let mut rules = self.universe.clone();
        for &i in members {
            if self.units[i].role == UnitRole::Rule {
                rules.intersect_with(&self.units[i].carrier);
            }
        }
        let mut world = rules.clone();
        for &i in members {
            if self.units[i].role == UnitRole::Fact {
                world.intersect_with(&self.units[i].carrier);
            }
        }
        !world.is_clear()
            && members.iter().all(|&i| {
                self.units[i].role != UnitRole::Default
                    || !rules.is_disjoint(&self.units[i].carrier)
            })
    }
}
