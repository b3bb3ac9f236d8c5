//! Random theories and oracle checks shared by the property suites.
//!
//! Each check recomputes its answer independently (direct set algebra,
//! brute-force subset scans, materialized relations) and compares it with
//! the library's result.

#![allow(dead_code)]

use std::collections::BTreeSet;

use dialectic_core::defaults::{DefaultRule, DefaultTheory};
use dialectic_core::hierarchy::Hierarchy;
use dialectic_core::inconsistency::{ArgumentUnit, UnitFamily};
use dialectic_core::logic::{models, Formula, ModelSet, Signature, Valuation};
use dialectic_core::preference::{InnerVariant, ModelOrderRelation, PacketKind, PreferenceConfig};
use proptest::prelude::*;

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn literal(n: usize) -> impl Strategy<Value = Formula> {
    (0..n, any::<bool>()).prop_map(|(i, pos)| {
        if pos {
            Formula::atom(i)
        } else {
            Formula::not(Formula::atom(i))
        }
    })
}

pub fn formula(n: usize) -> impl Strategy<Value = Formula> {
    literal(n).prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.prop_map(Formula::not),
        ]
    })
}

/// Scopes are mostly conjunctions of literals, so nested scopes are common.
fn scope(n: usize) -> impl Strategy<Value = Formula> {
    prop_oneof![
        3 => prop::collection::vec(literal(n), 1..=3).prop_map(Formula::conjunction),
        1 => formula(n),
        1 => Just(Formula::True),
    ]
}

#[derive(Debug, Clone)]
pub struct DefaultSpec {
    pub scope: Formula,
    pub conclusion: Formula,
    pub negated: bool,
}

#[derive(Debug, Clone)]
pub struct TheorySpec {
    pub atoms: usize,
    pub background: Vec<Formula>,
    pub defaults: Vec<DefaultSpec>,
}

impl TheorySpec {
    /// Builds the theory, dropping an inconsistent background and any
    /// default the theory rejects (e.g. an empty scope).
    pub fn build(&self) -> DefaultTheory {
        let sig = Signature::new((0..self.atoms).map(|i| format!("x{i}"))).unwrap();
        let mut theory = DefaultTheory::new(sig.clone(), self.background.clone()).unwrap();
        if theory.universe().is_empty() {
            theory = DefaultTheory::new(sig, vec![]).unwrap();
        }
        for (i, d) in self.defaults.iter().enumerate() {
            let mut rule = DefaultRule::new(format!("d{i}"), d.scope.clone(), d.conclusion.clone());
            if d.negated {
                rule = rule.negated();
            }
            if let Ok(next) = theory.attach(rule) {
                theory = next;
            }
        }
        theory
    }
}

pub fn theory(max_atoms: usize, max_defaults: usize) -> impl Strategy<Value = TheorySpec> {
    (1..=max_atoms).prop_flat_map(move |n| {
        let default = (scope(n), formula(n), prop::bool::weighted(0.15)).prop_map(
            |(scope, conclusion, negated)| DefaultSpec {
                scope,
                conclusion,
                negated,
            },
        );
        (
            prop::collection::vec(formula(n), 0..=1),
            prop::collection::vec(default, 0..=max_defaults),
        )
            .prop_map(move |(background, defaults)| TheorySpec {
                atoms: n,
                background,
                defaults,
            })
    })
}

pub fn variant() -> impl Strategy<Value = InnerVariant> {
    prop_oneof![
        Just(InnerVariant::Subset),
        Just(InnerVariant::Cardinality),
        Just(InnerVariant::Specificity),
    ]
}

/// Cells are disjoint, cover the universe, are ⊆-minimal among relevant
/// sets, and carry sound codes; relevant sets equal direct set algebra.
pub fn check_cells(t: &DefaultTheory) -> Check {
    let h = Hierarchy::from_theory(t).map_err(|e| e.to_string())?;
    let fam = &h.family;
    let k = fam.members.len();
    let mut expected = BTreeSet::new();
    for i in 0u32..(1 << k) {
        for j in 0u32..(1 << k) {
            if i & j != 0 {
                continue;
            }
            let mut x = fam.universe.clone();
            let mut y = ModelSet::empty(fam.universe.width());
            for (n, m) in fam.members.iter().enumerate() {
                if i >> n & 1 == 1 {
                    x.intersect_with(&m.models);
                }
                if j >> n & 1 == 1 {
                    y.union_with(&m.models);
                }
            }
            let r = x.difference(&y);
            if !r.is_empty() {
                expected.insert(r);
            }
        }
    }
    let ours: BTreeSet<ModelSet> = h.relevant.iter().map(|r| r.carrier.clone()).collect();
    ensure(ours == expected, || "relevant sets differ from set algebra".into())?;
    ensure(ours.len() == h.relevant.len(), || "relevant sets not deduplicated".into())?;

    let mut union = ModelSet::empty(fam.universe.width());
    for c in &h.cells {
        ensure(union.is_disjoint(&c.carrier), || format!("cell {} overlaps", c.code))?;
        union.union_with(&c.carrier);
        for r in &expected {
            ensure(!r.intersects(&c.carrier) || c.carrier.is_subset(r), || {
                format!("cell {} straddles a relevant set", c.code)
            })?;
        }
        for (n, m) in fam.members.iter().enumerate() {
            let bit = c.code.as_bytes()[n] == b'1';
            ensure(bit == c.carrier.is_subset(&m.models), || {
                format!("cell {} has an unsound bit {n}", c.code)
            })?;
        }
    }
    ensure(union == fam.universe, || "cells do not cover the universe".into())
}

/// ⊴ is a strict partial order whose Hasse edges generate it.
pub fn check_cell_order(t: &DefaultTheory) -> Check {
    let h = Hierarchy::from_theory(t).map_err(|e| e.to_string())?;
    let pairs = &h.order.pairs;
    let n = h.cells.len();
    for x in 0..n {
        ensure(!pairs.contains(&(x, x)), || "⊴ is reflexive somewhere".into())?;
        for y in 0..n {
            for z in 0..n {
                if pairs.contains(&(x, y)) && pairs.contains(&(y, z)) {
                    ensure(pairs.contains(&(x, z)), || "⊴ is not transitive".into())?;
                }
            }
        }
    }
    // Closure of the Hasse edges reproduces the order.
    let mut closure: BTreeSet<(usize, usize)> = h.order.hasse.clone();
    loop {
        let extra: Vec<(usize, usize)> = closure
            .iter()
            .flat_map(|&(a, b)| {
                closure
                    .iter()
                    .filter(move |&&(c, _)| c == b)
                    .map(move |&(_, d)| (a, d))
            })
            .filter(|p| !closure.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        closure.extend(extra);
    }
    ensure(&closure == pairs, || "Hasse edges do not generate ⊴".into())
}

/// μ and o partition each cell, μ members satisfy every valid positive
/// default, and o is empty without valid positive defaults.
pub fn check_mu_o(t: &DefaultTheory, config: &PreferenceConfig) -> Check {
    let r = ModelOrderRelation::build(t, config).map_err(|e| e.to_string())?;
    for (cell, p) in r.hierarchy.cells.iter().zip(&r.partitions) {
        ensure(p.mu.is_disjoint(&p.o), || format!("mu/o overlap in {}", p.code))?;
        ensure(p.mu.union(&p.o) == cell.carrier, || format!("mu/o do not cover {}", p.code))?;
        let mut positive = 0;
        for id in &p.valid {
            let d = t.default(id).unwrap();
            if d.is_negated() {
                continue;
            }
            positive += 1;
            let concl = models(&d.conclusion, t.signature()).unwrap();
            ensure(p.mu.is_subset(&concl), || format!("mu({}) violates {id}", p.code))?;
            // Every o member violates some valid positive default.
        }
        if positive == 0 {
            ensure(p.o.is_empty(), || format!("o({}) non-empty without defaults", p.code))?;
        }
    }
    Ok(())
}

/// For every listed point: valid ⊆ visible, and the valid defaults are
/// consistent with the classical information there.
pub fn check_valid_defaults(t: &DefaultTheory, points: &[Formula]) -> Check {
    for beta in points {
        let point = t.restrict(beta).unwrap();
        if point.is_empty() {
            continue;
        }
        let v = t.valid_defaults(beta).map_err(|e| e.to_string())?;
        ensure(v.valid.is_subset(&v.visible), || "valid not within visible".into())?;
        let content = |id: &String| {
            let d = t.default(id).unwrap();
            let s = models(&d.scope, t.signature()).unwrap();
            let c = models(&d.conclusion, t.signature()).unwrap();
            (d.is_negated(), s.clone(), if d.is_negated() { s.difference(&c) } else { s.intersection(&c) })
        };
        let mut joint = point.clone();
        for id in &v.valid {
            let (neg, _, c) = content(id);
            if !neg {
                joint.intersect_with(&c);
            }
        }
        ensure(!joint.is_empty(), || format!("valid defaults at {:?} inconsistent", v.point))?;
        for n in &v.valid {
            let (neg, scope_n, c) = content(n);
            if !neg {
                continue;
            }
            let scope_n = scope_n.intersection(t.universe());
            let mut cancel = point.intersection(&c);
            for p in &v.valid {
                let (pneg, scope_p, cp) = content(p);
                if !pneg && scope_n.is_subset(&scope_p.intersection(t.universe())) {
                    cancel.intersect_with(&cp);
                }
            }
            ensure(!cancel.is_empty(), || format!("negated {n} clashes at {:?}", v.point))?;
        }
    }
    Ok(())
}

/// Element order: irreflexive, transitive, μ flat, nothing above an o
/// packet (successor placement).
pub fn check_element_order(t: &DefaultTheory, config: &PreferenceConfig) -> Check {
    let r = ModelOrderRelation::build(t, config).map_err(|e| e.to_string())?;
    let universe: Vec<Valuation> = r.universe().iter().collect();
    let width = t.signature().len();
    let above: Vec<ModelSet> = universe
        .iter()
        .map(|&m| ModelSet::from_valuations(width, universe.iter().copied().filter(|&n| r.less(m, n))))
        .collect();
    for (i, &m) in universe.iter().enumerate() {
        ensure(!above[i].contains(m), || format!("{m} ⊑ {m}"))?;
        for n in above[i].iter() {
            let j = universe.iter().position(|&u| u == n).unwrap();
            ensure(above[j].is_subset(&above[i]), || format!("not transitive through {m} ⊑ {n}"))?;
            let (pm, pn) = (r.packet_of(m).unwrap(), r.packet_of(n).unwrap());
            ensure(!(pm == pn && pm.kind == PacketKind::Mu), || format!("μ not flat: {m} ⊑ {n}"))?;
            if config.placement == dialectic_core::preference::Placement::Successor {
                ensure(pm.kind == PacketKind::Mu || pm == pn, || {
                    format!("order continues above o packet: {m} ⊑ {n}")
                })?;
            }
        }
    }
    Ok(())
}

/// `minimal_models` equals a brute-force minimizer over the materialized
/// element relation.
pub fn check_minimal_models(t: &DefaultTheory, config: &PreferenceConfig, gammas: &[Formula]) -> Check {
    let r = ModelOrderRelation::build(t, config).map_err(|e| e.to_string())?;
    for gamma in gammas {
        let set = models(gamma, t.signature()).unwrap().intersection(t.universe());
        if set.is_empty() {
            continue;
        }
        let brute = ModelSet::from_valuations(
            set.width(),
            set.iter().filter(|&m| !set.iter().any(|n| r.less(n, m))),
        );
        let ours = r.minimal_models(gamma).map_err(|e| e.to_string())?;
        ensure(ours == brute, || format!("minimal models differ: {ours} vs {brute}"))?;
    }
    Ok(())
}

/// Minimal inconsistent subsets equal a brute-force scan of all subsets.
pub fn check_mis(atoms: usize, units: &[Formula]) -> Check {
    let sig = Signature::new((0..atoms).map(|i| format!("x{i}"))).unwrap();
    let family = UnitFamily::intensional(
        sig.clone(),
        units
            .iter()
            .enumerate()
            .map(|(i, f)| ArgumentUnit::formula(format!("u{i:02}"), f.clone()))
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let report = family.minimal_inconsistent_subsets().map_err(|e| e.to_string())?;

    let sets: Vec<ModelSet> = units.iter().map(|f| models(f, &sig).unwrap()).collect();
    let n = units.len();
    let inconsistent: Vec<u32> = (0u32..(1 << n))
        .filter(|&mask| {
            let mut joint = ModelSet::universe(atoms);
            for (i, s) in sets.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    joint.intersect_with(s);
                }
            }
            joint.is_empty()
        })
        .collect();
    let minimal: BTreeSet<Vec<String>> = inconsistent
        .iter()
        .filter(|&&m| !inconsistent.iter().any(|&o| o != m && o & m == o))
        .map(|&m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| format!("u{i:02}")).collect())
        .collect();
    let ours: BTreeSet<Vec<String>> = report.mis.iter().cloned().collect();
    ensure(ours == minimal, || format!("mis {ours:?} vs oracle {minimal:?}"))?;
    for (a, b) in report.mis.iter().zip(report.mis.iter().skip(1)) {
        ensure((a.len(), a) <= (b.len(), b), || "mis not sorted".into())?;
    }
    Ok(())
}

/// Duplicating a default under a new id leaves the cardinality-variant
/// minimal models unchanged.
pub fn check_duplicate_robustness(spec: &TheorySpec, gammas: &[Formula]) -> Check {
    let t = spec.build();
    let Some(first) = t.defaults().iter().find(|d| !d.is_negated()) else {
        return Ok(());
    };
    let twin = DefaultRule::new("twin", first.scope.clone(), first.conclusion.clone());
    let Ok(t2) = t.attach(twin) else {
        return Ok(());
    };
    let config = PreferenceConfig::new(InnerVariant::Cardinality);
    let a = ModelOrderRelation::build(&t, &config).map_err(|e| e.to_string())?;
    let b = ModelOrderRelation::build(&t2, &config).map_err(|e| e.to_string())?;
    for gamma in gammas {
        let (Ok(x), Ok(y)) = (a.minimal_models(gamma), b.minimal_models(gamma)) else {
            continue;
        };
        ensure(x == y, || format!("duplicate changed minimal models: {x} vs {y}"))?;
    }
    Ok(())
}

/// Conclusions of a classification hold together in a selected model.
pub fn check_classification(t: &DefaultTheory, facts: &[Formula]) -> Check {
    let r = ModelOrderRelation::build(t, &PreferenceConfig::default()).map_err(|e| e.to_string())?;
    let Ok(c) = r.classify(facts) else {
        return Ok(());
    };
    ensure(!c.models.is_empty(), || "classification selected no model".into())?;
    let sig = t.signature();
    let joint = c.conclusions.iter().fold(ModelSet::universe(sig.len()), |acc, lit| {
        let f = dialectic_core::logic::parse_formula(lit, sig).unwrap();
        acc.intersection(&models(&f, sig).unwrap())
    });
    ensure(joint.intersects(&c.models), || "conclusions not jointly satisfiable".into())
}

/// A theory together with `count` extra formulas over its own atoms.
pub fn theory_and_formulas(
    max_atoms: usize,
    max_defaults: usize,
    count: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (TheorySpec, Vec<Formula>)> {
    theory(max_atoms, max_defaults).prop_flat_map(move |spec| {
        let n = spec.atoms;
        (Just(spec), prop::collection::vec(formula(n), count.clone()))
    })
}

/// Proptest configuration for `cases` cases, without failure files.
pub fn cases(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
