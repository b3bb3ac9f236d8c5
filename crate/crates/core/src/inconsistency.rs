//! Minimal inconsistent subsets of a family of argument units.
//!
//! Units are either formulas over a signature (intensional mode) or explicit
//! element sets over a declared domain (extensional mode). In both modes a
//! set of units is consistent iff the intersection of their carriers is
//! non-empty; the empty set's intersection is the whole universe.
//!
//! The search walks subsets by increasing cardinality and skips every
//! superset of an already reported minimal set, so each reported set is
//! minimal by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{models, Formula, Signature};

/// Default cap on the number of units searched.
pub const DEFAULT_UNIT_CAP: usize = 16;

/// A family of labelled units with a monotone notion of joint consistency:
/// any superset of an inconsistent subset must also be inconsistent.
pub trait JointConsistency {
    fn unit_count(&self) -> usize;
    fn unit_id(&self, index: usize) -> &str;
    fn is_consistent(&self, members: &[usize]) -> bool;
}

/// The ⊆-minimal index sets of `0..n` satisfying `pred`, ordered by
/// cardinality and then lexicographically by index.
pub fn minimal_subsets<P>(n: usize, mut pred: P) -> Vec<Vec<usize>>
where
    P: FnMut(&[usize]) -> bool,
{
    assert!(n < 64, "subset search limited to 63 units");
    let mut found: Vec<u64> = Vec::new();
    let mut out = Vec::new();
    for k in 0..=n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let mask = combo.iter().fold(0u64, |m, &i| m | (1 << i));
            if !found.iter().any(|&f| f & mask == f) && pred(&combo) {
                found.push(mask);
                out.push(combo.clone());
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    out
}

fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Runs the minimal-inconsistent-subset search over any family.
pub fn analyze<C: JointConsistency + ?Sized>(family: &C, cap: usize) -> Result<InconsistencyReport> {
    let n = family.unit_count();
    if n > cap {
        return Err(Error::TooManyUnits { units: n, cap });
    }
    let mis = minimal_subsets(n, |members| !family.is_consistent(members));
    let units: Vec<String> = (0..n).map(|i| family.unit_id(i).to_string()).collect();
    Ok(InconsistencyReport::from_indices(units, &mis))
}

/// The minimal inconsistent subsets ("culprits") of a family and how often
/// each unit takes part in one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InconsistencyReport {
    pub units: Vec<String>,
    pub mis: Vec<Vec<String>>,
    pub frequencies: BTreeMap<String, usize>,
}

impl InconsistencyReport {
    pub fn empty<I, S>(units: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::from_indices(units.into_iter().map(Into::into).collect(), &[])
    }

    /// Builds a report from index sets; ids within a set and the sets
    /// themselves are sorted by cardinality, then lexicographically.
    pub fn from_indices(units: Vec<String>, mis: &[Vec<usize>]) -> Self {
        let mut sets: Vec<Vec<String>> = mis
            .iter()
            .map(|s| {
                let mut ids: Vec<String> = s.iter().map(|&i| units[i].clone()).collect();
                ids.sort();
                ids
            })
            .collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut frequencies: BTreeMap<String, usize> =
            units.iter().map(|u| (u.clone(), 0)).collect();
        for set in &sets {
            for id in set {
                *frequencies.entry(id.clone()).or_default() += 1;
            }
        }
        InconsistencyReport {
            units,
            mis: sets,
            frequencies,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.mis.is_empty()
    }

    pub fn frequency(&self, id: &str) -> usize {
        self.frequencies.get(id).copied().unwrap_or(0)
    }

    /// Ids occurring in at least one minimal inconsistent subset.
    pub fn culprits(&self) -> BTreeSet<&str> {
        self.mis.iter().flatten().map(String::as_str).collect()
    }

    /// True iff `last_id` lies in every minimal inconsistent subset, which
    /// must hold when the family was consistent before `last_id` joined it.
    pub fn last_argument_check(&self, last_id: &str) -> Result<bool> {
        if !self.units.iter().any(|u| u == last_id) {
            return Err(Error::UnknownUnit(last_id.to_string()));
        }
        Ok(self.mis.iter().all(|set| set.iter().any(|id| id == last_id)))
    }
}

impl fmt::Display for InconsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "units: {}", self.units.join(" "))?;
        if self.mis.is_empty() {
            writeln!(f, "consistent")?;
        }
        for set in &self.mis {
            writeln!(f, "mis: {{{}}}", set.join(", "))?;
        }
        for (id, n) in &self.frequencies {
            writeln!(f, "frequency {id} {n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitContent {
    Formula(Formula),
    Elements(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgumentUnit {
    pub id: String,
    pub content: UnitContent,
}

impl ArgumentUnit {
    pub fn formula(id: impl Into<String>, f: Formula) -> Self {
        ArgumentUnit {
            id: id.into(),
            content: UnitContent::Formula(f),
        }
    }

    pub fn elements<I, S>(id: impl Into<String>, elements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ArgumentUnit {
            id: id.into(),
            content: UnitContent::Elements(elements.into_iter().map(Into::into).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitDomain {
    Signature(Signature),
    Elements(Vec<String>),
}

impl UnitDomain {
    fn universe(&self) -> Result<FixedBitSet> {
        match self {
            UnitDomain::Signature(sig) => {
                sig.check_cap()?;
                let mut all = FixedBitSet::with_capacity(1 << sig.len());
                all.insert_range(..);
                Ok(all)
            }
            UnitDomain::Elements(domain) => {
                let mut all = FixedBitSet::with_capacity(domain.len());
                all.insert_range(..);
                Ok(all)
            }
        }
    }

    fn carrier(&self, unit: &ArgumentUnit) -> Result<FixedBitSet> {
        match (self, &unit.content) {
            (UnitDomain::Signature(sig), UnitContent::Formula(f)) => {
                Ok(models(f, sig)?.as_bits().clone())
            }
            (UnitDomain::Elements(domain), UnitContent::Elements(elements)) => {
                let mut bits = FixedBitSet::with_capacity(domain.len());
                for e in elements {
                    let i = domain
                        .iter()
                        .position(|d| d == e)
                        .ok_or_else(|| Error::UnknownElement(e.clone()))?;
                    bits.insert(i);
                }
                Ok(bits)
            }
            _ => Err(Error::MixedFamily(unit.id.clone())),
        }
    }
}

/// Units over one domain, with their carriers precomputed.
#[derive(Debug, Clone)]
pub struct UnitFamily {
    domain: UnitDomain,
    units: Vec<ArgumentUnit>,
    carriers: Vec<FixedBitSet>,
    universe: FixedBitSet,
    cap: usize,
}

impl UnitFamily {
    pub fn new(domain: UnitDomain, units: Vec<ArgumentUnit>) -> Result<Self> {
        let universe = domain.universe()?;
        let mut seen = BTreeSet::new();
        let mut carriers = Vec::with_capacity(units.len());
        for unit in &units {
            if !seen.insert(unit.id.as_str()) {
                return Err(Error::DuplicateUnit(unit.id.clone()));
            }
            carriers.push(domain.carrier(unit)?);
        }
        Ok(UnitFamily {
            domain,
            units,
            carriers,
            universe,
            cap: DEFAULT_UNIT_CAP,
        })
    }

    pub fn intensional(sig: Signature, units: Vec<ArgumentUnit>) -> Result<Self> {
        Self::new(UnitDomain::Signature(sig), units)
    }

    pub fn extensional<I, S>(domain: I, units: Vec<ArgumentUnit>) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(
            UnitDomain::Elements(domain.into_iter().map(Into::into).collect()),
            units,
        )
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn units(&self) -> &[ArgumentUnit] {
        &self.units
    }

    pub fn domain(&self) -> &UnitDomain {
        &self.domain
    }

    fn intersection(&self, members: &[usize]) -> FixedBitSet {
        let mut acc = self.universe.clone();
        for &i in members {
            acc.intersect_with(&self.carriers[i]);
        }
        acc
    }

    pub fn minimal_inconsistent_subsets(&self) -> Result<InconsistencyReport> {
        analyze(self, self.cap)
    }

    /// Minimal subsets whose joint content is non-empty and contained in the
    /// target's content: the semantic arguments "for" the target. Units
    /// sharing the target's id are left out.
    pub fn support_sets(&self, target: &ArgumentUnit) -> Result<Vec<Vec<String>>> {
        let goal = self.domain.carrier(target)?;
        let candidates: Vec<usize> = (0..self.units.len())
            .filter(|&i| self.units[i].id != target.id)
            .collect();
        if candidates.len() > self.cap {
            return Err(Error::TooManyUnits {
                units: candidates.len(),
                cap: self.cap,
            });
        }
        let found = minimal_subsets(candidates.len(), |picked| {
            let members: Vec<usize> = picked.iter().map(|&k| candidates[k]).collect();
            let joint = self.intersection(&members);
            !joint.is_clear() && joint.is_subset(&goal)
        });
        let mut out: Vec<Vec<String>> = found
            .into_iter()
            .map(|picked| {
                let mut ids: Vec<String> = picked
                    .iter()
                    .map(|&k| self.units[candidates[k]].id.clone())
                    .collect();
                ids.sort();
                ids
            })
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }
}

impl JointConsistency for UnitFamily {
    fn unit_count(&self) -> usize {
        self.units.len()
    }

    fn unit_id(&self, index: usize) -> &str {
        &self.units[index].id
    }

    fn is_consistent(&self, members: &[usize]) -> bool {
        !self.intersection(members).is_clear()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn symmetrical() -> UnitFamily {
        UnitFamily::extensional(
            ["x", "a", "b", "c"],
            vec![
                ArgumentUnit::elements("A", ["x", "a"]),
                ArgumentUnit::elements("B", ["x", "b"]),
                ArgumentUnit::elements("C", ["x", "c"]),
                ArgumentUnit::elements("Y", ["a", "b", "c"]),
            ],
        )
        .unwrap()
    }

    fn ids(sets: &[&[&str]]) -> Vec<Vec<String>> {
        sets.iter()
            .map(|s| s.iter().map(|x| x.to_string()).collect())
            .collect()
    }

    #[test]
    fn combinations_are_complete() {
        let all = minimal_subsets(4, |_| false);
        assert!(all.is_empty());
        let mut count = 0;
        minimal_subsets(5, |_| {
            count += 1;
            false
        });
        assert_eq!(count, 32);
    }

    #[test]
    fn symmetrical_mis() {
        let report = symmetrical().minimal_inconsistent_subsets().unwrap();
        assert_eq!(
            report.mis,
            ids(&[&["A", "B", "Y"], &["A", "C", "Y"], &["B", "C", "Y"]])
        );
        assert_eq!(report.frequency("Y"), 3);
        assert_eq!(report.frequency("A"), 2);
        assert!(report.last_argument_check("Y").unwrap());
        assert!(!report.last_argument_check("A").unwrap());
    }

    #[test]
    fn consistent_family_has_no_mis() {
        let fam = UnitFamily::extensional(
            ["x", "y"],
            vec![
                ArgumentUnit::elements("A", ["x"]),
                ArgumentUnit::elements("B", ["x", "y"]),
            ],
        )
        .unwrap();
        let report = fam.minimal_inconsistent_subsets().unwrap();
        assert!(report.is_consistent());
        assert!(report.last_argument_check("B").unwrap());
    }

    #[test]
    fn last_argument_check_rejects_unknown_ids() {
        let report = symmetrical().minimal_inconsistent_subsets().unwrap();
        assert_eq!(
            report.last_argument_check("Q"),
            Err(Error::UnknownUnit("Q".into()))
        );
    }

    #[test]
    fn last_argument_absent() {
        let sig = Signature::new(["p", "q"]).unwrap();
        let fam = UnitFamily::intensional(
            sig.clone(),
            vec![
                ArgumentUnit::formula("p", parse_formula("p", &sig).unwrap()),
                ArgumentUnit::formula("~p", parse_formula("~p", &sig).unwrap()),
                ArgumentUnit::formula("q", parse_formula("q", &sig).unwrap()),
            ],
        )
        .unwrap();
        let report = fam.minimal_inconsistent_subsets().unwrap();
        assert_eq!(report.mis, ids(&[&["p", "~p"]]));
        assert!(!report.last_argument_check("q").unwrap());
    }

    #[test]
    fn supports_in_symmetrical() {
        let fam = symmetrical();
        let c = ArgumentUnit::elements("C", ["x", "c"]);
        assert_eq!(fam.support_sets(&c).unwrap(), ids(&[&["A", "B"]]));
        let y = ArgumentUnit::elements("Y", ["a", "b", "c"]);
        assert!(fam.support_sets(&y).unwrap().is_empty());
    }

    #[test]
    fn universal_target_is_supported_by_nothing() {
        let fam = symmetrical();
        let all = ArgumentUnit::elements("T", ["x", "a", "b", "c"]);
        assert_eq!(fam.support_sets(&all).unwrap(), vec![Vec::<String>::new()]);
    }

    #[test]
    fn disjoint_target_has_no_support() {
        let fam = UnitFamily::extensional(
            ["x", "y", "z"],
            vec![
                ArgumentUnit::elements("A", ["x"]),
                ArgumentUnit::elements("B", ["x", "y"]),
            ],
        )
        .unwrap();
        let t = ArgumentUnit::elements("T", ["z"]);
        assert!(fam.support_sets(&t).unwrap().is_empty());
    }

    #[test]
    fn family_errors() {
        let sig = Signature::new(["p"]).unwrap();
        assert_eq!(
            UnitFamily::intensional(sig, vec![ArgumentUnit::elements("A", ["x"])]).unwrap_err(),
            Error::MixedFamily("A".into())
        );
        assert_eq!(
            UnitFamily::extensional(["x"], vec![ArgumentUnit::elements("A", ["y"])]).unwrap_err(),
            Error::UnknownElement("y".into())
        );
        assert_eq!(
            UnitFamily::extensional(
                ["x"],
                vec![
                    ArgumentUnit::elements("A", ["x"]),
                    ArgumentUnit::elements("A", ["x"])
                ]
            )
            .unwrap_err(),
            Error::DuplicateUnit("A".into())
        );
        let many: Vec<ArgumentUnit> = (0..17)
            .map(|i| ArgumentUnit::elements(format!("u{i}"), ["x"]))
            .collect();
        let fam = UnitFamily::extensional(["x"], many).unwrap();
        assert!(matches!(
            fam.minimal_inconsistent_subsets(),
            Err(Error::TooManyUnits { units: 17, cap: 16 })
        ));
    }

    #[test]
    fn report_text() {
        let report = symmetrical().minimal_inconsistent_subsets().unwrap();
        let text = report.to_string();
        assert!(text.contains("mis: {A, B, Y}"));
        assert!(text.contains("frequency Y 3"));
    }
}
