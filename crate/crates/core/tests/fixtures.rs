use std::collections::BTreeSet;

use dialectic_core::defaults::{parse_theory, DefaultTheory, Phase};
use dialectic_core::hierarchy::{AttachmentFamily, Hierarchy};
use dialectic_core::logic::{parse_formula, Formula, ModelSet};
use dialectic_core::preference::{ModelOrderRelation, PacketId, PreferenceConfig};
use petgraph::algo::tred::dag_transitive_reduction_closure;
use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use petgraph::visit::{EdgeRef, IntoEdgeReferences};

fn load(name: &str) -> DefaultTheory {
    let path = format!("{}/fixtures/{name}.theory", env!("CARGO_MANIFEST_DIR"));
    parse_theory(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn f(t: &DefaultTheory, text: &str) -> Formula {
    parse_formula(text, t.signature()).unwrap()
}

fn restrict(t: &DefaultTheory, text: &str) -> ModelSet {
    t.restrict(&f(t, text)).unwrap()
}

/// Every non-empty `(⋂ I) − (⋃ J)` over the family, by direct set algebra.
fn oracle_relevant(fam: &AttachmentFamily) -> BTreeSet<ModelSet> {
    let k = fam.members.len();
    let mut out = BTreeSet::new();
    for i in 0u32..(1 << k) {
        for j in 0u32..(1 << k) {
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
                out.insert(r);
            }
        }
    }
    out
}

#[test]
fn fixture_e_family() {
    let t = load("fixture_e");
    let h = Hierarchy::from_theory(&t).unwrap();
    let labels: Vec<&str> = h.family.members.iter().map(|m| m.label.as_str()).collect();
    assert_eq!(labels, ["a", "a1", "a2"]);
}

#[test]
fn fixture_e_relevant_sets_match_set_algebra() {
    let t = load("fixture_e");
    let h = Hierarchy::from_theory(&t).unwrap();
    let ours: BTreeSet<ModelSet> = h.relevant.iter().map(|r| r.carrier.clone()).collect();
    assert_eq!(ours.len(), h.relevant.len(), "carriers are deduplicated");
    assert_eq!(ours, oracle_relevant(&h.family));

    let listed = [
        "true", "~a", "~a1", "~a2", "~a & ~a1", "a", "a & ~a1", "a & ~a2", "a1", "a1 & ~a",
        "a1 & ~a2", "a1 & ~a & ~a2", "a2", "a2 & ~a", "a & a1", "a & a1 & ~a2", "a & a2",
    ];
    let listed: BTreeSet<ModelSet> = listed.iter().map(|s| restrict(&t, s)).collect();
    assert_eq!(listed.len(), 17);
    assert!(listed.is_subset(&ours));
    let extra: Vec<&ModelSet> = ours.difference(&listed).collect();
    assert_eq!(extra, [&restrict(&t, "~a & ~a2")]);
}

#[test]
fn fixture_e_cells() {
    let t = load("fixture_e");
    let h = Hierarchy::from_theory(&t).unwrap();
    let codes: BTreeSet<&str> = h.cells.iter().map(|c| c.code.as_str()).collect();
    assert_eq!(codes, BTreeSet::from(["000", "100", "110", "111", "011", "010"]));
    let expressions: Vec<(&str, &str)> = h
        .cells
        .iter()
        .map(|c| (c.code.as_str(), c.expression.as_str()))
        .collect();
    assert!(expressions.contains(&("000", "U - a - a1")));
    assert!(expressions.contains(&("110", "a & a1 - a2")));
    assert!(expressions.contains(&("111", "a & a2")));
    assert!(expressions.contains(&("011", "a2 - a")));

    // Cells partition the universe.
    let mut union = ModelSet::empty(t.signature().len());
    for c in &h.cells {
        assert!(union.is_disjoint(&c.carrier));
        union.union_with(&c.carrier);
    }
    assert_eq!(&union, t.universe());
}

#[test]
fn fixture_e_order_and_hasse() {
    let t = load("fixture_e");
    let h = Hierarchy::from_theory(&t).unwrap();
    let idx = |code: &str| h.cell_by_code(code).unwrap();

    let chains = [
        ["000", "100", "110", "111"],
        ["000", "010", "011", "111"],
    ];
    let mut generators: Vec<(usize, usize)> = Vec::new();
    for chain in chains {
        for w in chain.windows(2) {
            generators.push((idx(w[0]), idx(w[1])));
        }
    }
    generators.push((idx("010"), idx("110")));

    // Oracle: closure and reduction of the generating pairs by petgraph.
    let mut g = DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..h.cells.len()).map(|_| g.add_node(())).collect();
    for &(a, b) in &generators {
        g.add_edge(nodes[a], nodes[b], ());
    }
    let topo = toposort(&g, None).unwrap();
    let (adj, _) = petgraph::algo::tred::dag_to_toposorted_adjacency_list::<_, u32>(&g, &topo);
    let (reduction, closure) = dag_transitive_reduction_closure(&adj);
    let back = |e: (u32, u32)| (topo[e.0 as usize].index(), topo[e.1 as usize].index());
    let edges = |l: &petgraph::adj::List<(), u32>| -> Vec<(u32, u32)> {
        l.edge_references().map(|e| (e.source(), e.target())).collect()
    };
    let closure: BTreeSet<(usize, usize)> = edges(&closure).into_iter().map(back).collect();
    let reduction: BTreeSet<(usize, usize)> = edges(&reduction).into_iter().map(back).collect();

    assert_eq!(h.order.pairs, closure);
    assert_eq!(h.order.hasse, reduction);
    assert_eq!(h.order.hasse.len(), 7);
    let dot = h.export_dot();
    assert_eq!(dot.matches("->").count(), 7);
    assert_eq!(dot.matches("label=").count(), 6);
}

#[test]
fn fixture_e_packets() {
    let t = load("fixture_e");
    let r = ModelOrderRelation::build(&t, &PreferenceConfig::default()).unwrap();
    assert_eq!(r.packets().len(), 12);
    let idx = |code: &str| r.hierarchy.cell_by_code(code).unwrap();
    let mu = |c: &str| PacketId::mu(idx(c));
    let o = |c: &str| PacketId::o(idx(c));
    let listed = [
        (mu("000"), mu("100")),
        (mu("100"), mu("110")),
        (mu("110"), mu("111")),
        (mu("000"), mu("010")),
        (mu("010"), mu("011")),
        (mu("011"), mu("111")),
        (mu("010"), mu("110")),
        (mu("100"), o("000")),
        (mu("010"), o("000")),
        (mu("110"), o("100")),
        (mu("110"), o("010")),
        (mu("011"), o("010")),
        (mu("111"), o("110")),
        (mu("111"), o("011")),
    ];
    for pair in listed {
        assert!(r.base_pairs.contains(&pair), "{} < {}", r.label(pair.0), r.label(pair.1));
    }
    for c in &r.hierarchy.cells {
        let i = idx(&c.code);
        assert!(r.base_pairs.contains(&(PacketId::mu(i), PacketId::o(i))));
    }
    // No pair starts at an o packet.
    assert!(r.packet_pairs.iter().all(|(a, _)| a.kind == dialectic_core::preference::PacketKind::Mu));
}

#[test]
fn tweety_end_to_end() {
    let t = load("tweety");
    let v = t.valid_defaults(&f(&t, "p")).unwrap();
    assert_eq!(v.valid, BTreeSet::from(["d2".to_string()]));
    assert_eq!(v.eliminated, vec![("d1".to_string(), Phase::Default)]);

    let r = ModelOrderRelation::build(&t, &PreferenceConfig::default()).unwrap();
    let holds = |g: &str, p: &str| r.default_holds(&f(&t, g), &f(&t, p)).unwrap().holds;
    assert!(holds("b", "f"));
    assert!(holds("p", "~f"));
    assert!(!holds("p", "f"));
    let c = r.classify(&[f(&t, "b")]).unwrap();
    assert_eq!((c.cells.as_slice(), c.packets.as_slice()), (&["10".to_string()][..], &["mu(10)".to_string()][..]));
    let c = r.classify(&[f(&t, "b"), f(&t, "~f")]).unwrap();
    assert_eq!(c.packets, ["o(10)"]);
}

#[test]
fn nixon_with_and_without_block() {
    let t = load("nixon");
    let v = t.valid_defaults(&f(&t, "q & r")).unwrap();
    assert!(v.valid.is_empty());
    let r = ModelOrderRelation::build(&t, &PreferenceConfig::default()).unwrap();
    let verdict = r.default_holds(&f(&t, "q & r"), &f(&t, "pa")).unwrap();
    assert!(!verdict.holds);
    assert!(!r.default_holds(&f(&t, "q & r"), &f(&t, "~pa")).unwrap().holds);
    assert!(r.default_holds(&f(&t, "q & ~r"), &f(&t, "pa")).unwrap().holds);

    let blocked = t.block_inheritance("dq", f(&t, "q & r")).unwrap();
    let r = ModelOrderRelation::build(&blocked, &PreferenceConfig::default()).unwrap();
    assert!(r.default_holds(&f(&t, "q & r"), &f(&t, "~pa")).unwrap().holds);
    assert!(r.default_holds(&f(&t, "q & ~r"), &f(&t, "pa")).unwrap().holds);
}
