use serde::{Deserialize, Serialize};

use crate::defaults::DefaultTheory;
use crate::error::{Error, Result};
use crate::logic::{ModelSet, Valuation};

/// How the members of an `o` packet are ordered by the valid defaults they
/// satisfy. Negated defaults assert nothing and never count.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "variant", content = "priority")]
pub enum InnerVariant {
    /// `m` is better than `m′` if it satisfies a strict superset of the
    /// defaults `m′` satisfies.
    #[default]
    Subset,
    /// `m` is better if it satisfies more distinct conclusions.
    Cardinality,
    /// Lexicographic along an explicit list of default ids, which must cover
    /// every valid default.
    Priority(Vec<String>),
    /// Lexicographic by specificity: compare the satisfied subsets among the
    /// most specific defaults first, then the next level, and so on.
    Specificity,
}

impl InnerVariant {
    pub fn name(&self) -> &'static str {
        match self {
            InnerVariant::Subset => "subset",
            InnerVariant::Cardinality => "cardinality",
            InnerVariant::Priority(_) => "priority",
            InnerVariant::Specificity => "specificity",
        }
    }
}

#[derive(Debug, Clone)]
enum Rule {
    Subset,
    /// Distinct conclusion sets, counted.
    Cardinality(Vec<ModelSet>),
    /// Defaults in priority order.
    Priority,
    /// Default positions (into `conclusions`) per specificity level, most
    /// specific first.
    Levels(Vec<Vec<usize>>),
}

/// `⊵` for one cell.
#[derive(Debug, Clone)]
pub(crate) struct InnerOrder {
    conclusions: Vec<ModelSet>,
    rule: Rule,
}

impl InnerOrder {
    /// `positive` are the valid non-negated defaults of the cell, by index.
    pub fn new(
        theory: &DefaultTheory,
        variant: &InnerVariant,
        cell: &ModelSet,
        valid: &[usize],
    ) -> Result<Self> {
        let defaults = theory.defaults();
        let mut positive: Vec<usize> = valid
            .iter()
            .copied()
            .filter(|&i| !defaults[i].is_negated())
            .collect();
        let rule = match variant {
            InnerVariant::Subset => Rule::Subset,
            InnerVariant::Cardinality => {
                let mut groups: Vec<ModelSet> = Vec::new();
                for &i in &positive {
                    let set = theory.conclusion_models(i).intersection(cell);
                    if !groups.contains(&set) {
                        groups.push(set);
                    }
                }
                Rule::Cardinality(groups)
            }
            InnerVariant::Priority(list) => {
                for &i in valid {
                    if !list.contains(&defaults[i].id) {
                        return Err(Error::IncompletePriority(defaults[i].id.clone()));
                    }
                }
                positive.sort_by_key(|&i| list.iter().position(|id| *id == defaults[i].id));
                Rule::Priority
            }
            InnerVariant::Specificity => {
                let mut left: Vec<usize> = (0..positive.len()).collect();
                let mut levels = Vec::new();
                while !left.is_empty() {
                    let level: Vec<usize> = left
                        .iter()
                        .copied()
                        .filter(|&a| {
                            !left
                                .iter()
                                .any(|&b| b != a && theory.stronger(positive[b], positive[a]))
                        })
                        .collect();
                    if level.is_empty() {
                        // Explicit orders are checked acyclic; this is a guard.
                        levels.push(left.clone());
                        break;
                    }
                    left.retain(|a| !level.contains(a));
                    levels.push(level);
                }
                Rule::Levels(levels)
            }
        };
        let conclusions = positive
            .iter()
            .map(|&i| theory.conclusion_models(i).clone())
            .collect();
        Ok(InnerOrder { conclusions, rule })
    }

    fn profile(&self, m: Valuation) -> Vec<bool> {
        self.conclusions.iter().map(|c| c.contains(m)).collect()
    }

    /// `m` strictly better than `n`.
    pub fn better(&self, m: Valuation, n: Valuation) -> bool {
        let (pm, pn) = (self.profile(m), self.profile(n));
        let superset = |idx: &mut dyn Iterator<Item = usize>| -> Option<bool> {
            // Some(true): strict superset; Some(false): equal; None: neither.
            let mut strict = false;
            for i in idx {
                match (pm[i], pn[i]) {
                    (false, true) => return None,
                    (true, false) => strict = true,
                    _ => {}
                }
            }
            Some(strict)
        };
        match &self.rule {
            Rule::Subset => superset(&mut (0..pm.len())) == Some(true),
            Rule::Cardinality(groups) => {
                let count = |v: Valuation| groups.iter().filter(|g| g.contains(v)).count();
                count(m) > count(n)
            }
            Rule::Priority => match pm.iter().zip(&pn).find(|(a, b)| a != b) {
                Some((a, _)) => *a,
                None => false,
            },
            Rule::Levels(levels) => {
                for level in levels {
                    let differs = level.iter().any(|&i| pm[i] != pn[i]);
                    if differs {
                        return superset(&mut level.iter().copied()) == Some(true);
                    }
                }
                false
            }
        }
    }
}
