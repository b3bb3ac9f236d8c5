#[path = "support/props.rs"]
mod props;

use dialectic_core::defaults::DefaultTheory;
use dialectic_core::inconsistency::{ArgumentUnit, UnitFamily};
use dialectic_core::logic::{
    entails, is_consistent, models, parse_formula, strictly_more_specific, Formula, ModelSet,
    Signature,
};
use dialectic_core::preference::{Placement, PreferenceConfig};
use dialectic_core::size::{check_size_gate, Measure, SizePolicy, SizeSets, SizeVerdict};
use proptest::prelude::*;

use props::*;

fn sig(n: usize) -> Signature {
    Signature::new((0..n).map(|i| format!("x{i}"))).unwrap()
}

fn config(variant: dialectic_core::preference::InnerVariant, radical: bool) -> PreferenceConfig {
    PreferenceConfig {
        variant,
        placement: if radical {
            Placement::Radical
        } else {
            Placement::Successor
        },
    }
}

fn run(check: Check) -> Result<(), TestCaseError> {
    check.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(cases(256))]

    #[test]
    fn negation_and_conjunction_are_set_algebra(f in formula(6), g in formula(6)) {
        let s = sig(6);
        let mf = models(&f, &s).unwrap();
        let mg = models(&g, &s).unwrap();
        prop_assert_eq!(models(&Formula::not(f.clone()), &s).unwrap(), mf.complement());
        prop_assert_eq!(models(&Formula::and(f, g), &s).unwrap(), mf.intersection(&mg));
    }

    #[test]
    fn entailment_is_refutation(gamma in prop::collection::vec(formula(5), 0..4), phi in formula(5)) {
        let s = sig(5);
        let mut with_neg = gamma.clone();
        with_neg.push(Formula::not(phi.clone()));
        prop_assert_eq!(entails(&gamma, &phi, &s).unwrap(), !is_consistent(&with_neg, &s).unwrap());
    }

    #[test]
    fn specificity_is_strict_and_transitive(fs in prop::collection::vec(formula(4), 3)) {
        let s = sig(4);
        for f in &fs {
            prop_assert!(!strictly_more_specific(f, f, &s).unwrap());
        }
        let (a, b, c) = (&fs[0], &fs[1], &fs[2]);
        if strictly_more_specific(a, b, &s).unwrap() && strictly_more_specific(b, c, &s).unwrap() {
            prop_assert!(strictly_more_specific(a, c, &s).unwrap());
        }
    }

    #[test]
    fn printing_round_trips(f in formula(6)) {
        let s = sig(6);
        let text = f.to_text(&s);
        let back = parse_formula(&text, &s).unwrap();
        prop_assert_eq!(models(&back, &s).unwrap(), models(&f, &s).unwrap());
    }

    #[test]
    fn mis_matches_brute_force(atoms in 1usize..=5, units in prop::collection::vec(formula(5), 0..=12)) {
        let units: Vec<Formula> = units.into_iter().filter(|f| f.max_atom().is_none_or(|m| m < atoms)).collect();
        run(check_mis(atoms, &units))?;
    }

    #[test]
    fn adding_a_unit_keeps_or_refines_old_mis(units in prop::collection::vec(formula(4), 1..=10), extra in formula(4)) {
        let s = sig(4);
        let family = |fs: &[Formula]| {
            UnitFamily::intensional(
                s.clone(),
                fs.iter().enumerate().map(|(i, f)| ArgumentUnit::formula(format!("u{i:02}"), f.clone())).collect(),
            )
            .unwrap()
            .minimal_inconsistent_subsets()
            .unwrap()
        };
        let before = family(&units);
        let mut more = units.clone();
        more.push(extra);
        let after = family(&more);
        for old in &before.mis {
            prop_assert!(after.mis.iter().any(|new| new.iter().all(|id| old.contains(id))));
        }
        for (i, a) in after.mis.iter().enumerate() {
            for (j, b) in after.mis.iter().enumerate() {
                if i != j {
                    prop_assert!(!a.iter().all(|id| b.contains(id)), "antichain");
                }
            }
        }
    }

    #[test]
    fn cells_partition_the_universe(spec in theory(10, 5)) {
        run(check_cells(&spec.build()))?;
    }

    #[test]
    fn cell_order_is_a_strict_partial_order(spec in theory(10, 5)) {
        run(check_cell_order(&spec.build()))?;
    }

    #[test]
    fn mu_and_o_partition_every_cell(spec in theory(10, 5), v in variant()) {
        run(check_mu_o(&spec.build(), &config(v, false)))?;
    }

    #[test]
    fn valid_defaults_are_consistent_at_their_point((spec, points) in theory_and_formulas(10, 5, 1..=3)) {
        let t = spec.build();
        run(check_valid_defaults(&t, &points))?;
    }

    #[test]
    fn element_order_is_a_strict_partial_order(spec in theory(7, 5), v in variant(), radical in any::<bool>()) {
        run(check_element_order(&spec.build(), &config(v, radical)))?;
    }

    #[test]
    fn minimal_models_match_brute_force(
        (spec, gammas) in theory_and_formulas(7, 5, 1..=3),
        v in variant(),
        radical in any::<bool>(),
    ) {
        run(check_minimal_models(&spec.build(), &config(v, radical), &gammas))?;
    }

    #[test]
    fn duplicating_a_default_keeps_cardinality_minima((spec, gammas) in theory_and_formulas(6, 4, 1..=3)) {
        run(check_duplicate_robustness(&spec, &gammas))?;
    }

    #[test]
    fn classification_conclusions_are_satisfiable(
        spec in theory(7, 5),
        facts in prop::collection::vec(literal(7), 0..3),
    ) {
        let facts: Vec<Formula> = facts.into_iter().filter(|f| f.max_atom().is_none_or(|m| m < spec.atoms)).collect();
        run(check_classification(&spec.build(), &facts))?;
    }

    #[test]
    fn blocks_never_add_visibility((spec, fs) in theory_and_formulas(6, 4, 2..=2), pick in any::<prop::sample::Index>()) {
        let t = spec.build();
        let (at, beta) = (fs[0].clone(), fs[1].clone());
        if t.defaults().is_empty() {
            return Ok(());
        }
        let d = &t.defaults()[pick.index(t.defaults().len())];
        let inside = Formula::and(d.scope.clone(), at);
        let Ok(blocked) = t.block_inheritance(&d.id.clone(), inside) else { return Ok(()); };
        if let (Ok(before), Ok(after)) = (t.visible_defaults(&beta), blocked.visible_defaults(&beta)) {
            prop_assert!(after.is_subset(&before));
        }
    }

    #[test]
    fn hard_fail_iff_no_overlap(scope in formula(4), holds in formula(4)) {
        let s = sig(4);
        let x = models(&scope, &s).unwrap();
        let y = models(&holds, &s).unwrap();
        let report = check_size_gate(
            SizeSets { scope: &x, holds: &y, exceptions: &[] },
            &Measure::Counting,
            &SizePolicy::<f64>::standard(),
        );
        prop_assert_eq!(report.verdict == SizeVerdict::HardFail, x.intersection(&y).is_empty());
    }
}

#[test]
fn empty_theory_is_a_single_cell() {
    let t = DefaultTheory::new(sig(3), vec![]).unwrap();
    run_plain(check_cells(&t));
    run_plain(check_element_order(&t, &PreferenceConfig::default()));
    let _ = ModelSet::empty(0);
}

fn run_plain(check: Check) {
    if let Err(e) = check {
        panic!("{e}");
    }
}
