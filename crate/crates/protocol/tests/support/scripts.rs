//! Scripted sessions shared by the protocol tests and the acceptance run.

#![allow(dead_code)]

use dialectic_protocol::{
    Action, Content, DefenseMode, Mode, MoveRequest, Participant, Session, SessionConfig,
    TargetPolicy,
};

pub fn participants() -> Vec<Participant> {
    vec![
        Participant::arbiter("arbiter"),
        Participant::participant("ann"),
        Participant::participant("bob"),
    ]
}

pub fn extensional(domain: &[&str]) -> Session {
    Session::open(SessionConfig::new(
        participants(),
        Mode::Extensional {
            domain: domain.iter().map(|s| s.to_string()).collect(),
        },
    ))
    .unwrap()
}

pub fn fact(author: &str, label: &str, items: &[&str]) -> MoveRequest {
    MoveRequest::new(
        author,
        Action::AssertFact {
            content: Content::elements(items.iter().copied()),
        },
    )
    .labelled(label)
}

pub fn vote(author: &str, proposal: &str, approve: bool) -> MoveRequest {
    MoveRequest::new(
        author,
        Action::RetractVote {
            proposal: proposal.into(),
            approve,
        },
    )
}

pub fn propose(author: &str, target: &str) -> MoveRequest {
    MoveRequest::new(author, Action::RetractProposal { target: target.into() })
}

pub fn defend(author: &str, target: &str, mode: DefenseMode, premises: &[&str]) -> MoveRequest {
    MoveRequest::new(
        author,
        Action::Defend {
            target: target.into(),
            mode,
        },
    )
    .based_on(premises.iter().copied())
}

pub fn choose(policy: TargetPolicy) -> MoveRequest {
    MoveRequest::new("arbiter", Action::ArbiterTargetChoice { policy, target: None })
}

/// A, B and C asserted by ann, then Y by bob.
pub fn symmetrical() -> Session {
    let mut s = extensional(&["x", "a", "b", "c"]);
    s.submit(fact("ann", "A", &["x", "a"])).unwrap();
    s.submit(fact("ann", "B", &["x", "b"])).unwrap();
    s.submit(fact("ann", "C", &["x", "c"])).unwrap();
    s.submit(fact("bob", "Y", &["a", "b", "c"])).unwrap();
    s
}

/// Names of the move ids in each minimal inconsistent set.
pub fn named_mis(s: &Session) -> Vec<Vec<String>> {
    s.report
        .mis
        .iter()
        .map(|set| {
            let mut names: Vec<String> =
                set.iter().map(|id| s.get(id).unwrap().name().to_string()).collect();
            names.sort();
            names
        })
        .collect()
}

/// The Symmetrical session after a rejected retraction of Y and defenses of
/// Y, A and B: the set {A, B, Y} is fully defended.
pub fn deadlocked() -> Session {
    let mut s = symmetrical();
    s.submit(propose("ann", "Y")).unwrap();
    s.submit(vote("ann", "m5", true)).unwrap();
    s.submit(vote("bob", "m5", false)).unwrap();
    s.submit(choose(TargetPolicy::MaxFrequency)).unwrap();
    s.submit(defend("bob", "Y", DefenseMode::ArgueConsistent, &[])).unwrap();
    s.submit(defend("ann", "A", DefenseMode::Prove, &["B", "C"])).unwrap();
    s.submit(defend("ann", "B", DefenseMode::Prove, &["A", "C"])).unwrap();
    s
}
