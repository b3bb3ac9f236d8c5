//! Participants, move requests and the typed payloads they carry.

use std::fmt;

use dialectic_core::defaults::Provenance;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Participant,
    Arbiter,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Participant => "participant",
            Role::Arbiter => "arbiter",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Participant {
    pub id: String,
    pub name: String,
    pub role: Role,
}

impl Participant {
    pub fn participant(id: impl Into<String>) -> Self {
        let id = id.into();
        Participant {
            name: id.clone(),
            id,
            role: Role::Participant,
        }
    }

    pub fn arbiter(id: impl Into<String>) -> Self {
        let id = id.into();
        Participant {
            name: id.clone(),
            id,
            role: Role::Arbiter,
        }
    }
}

/// A formula (intensional sessions) or an explicit element set
/// (extensional sessions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Content {
    Formula(String),
    Elements(Vec<String>),
}

impl Content {
    pub fn formula(text: impl Into<String>) -> Self {
        Content::Formula(text.into())
    }

    pub fn elements<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Content::Elements(items.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for Content {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Content::Formula(text) => f.write_str(text),
            Content::Elements(items) => write!(f, "{{{}}}", items.join(", ")),
        }
    }
}

/// A default as it travels over the wire: `scope ∼ conclusion`, or
/// `scope ≁ conclusion` when negated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefaultSpec {
    pub scope: Content,
    pub conclusion: Content,
    #[serde(default)]
    pub negated: bool,
    /// Exception formulas; intensional sessions only.
    #[serde(default)]
    pub exceptions: Vec<String>,
    #[serde(default)]
    pub surprise: f64,
    #[serde(default)]
    pub homogeneous: bool,
    #[serde(default)]
    pub provenance: Provenance,
    /// Subsets of the scope where inheritance is blocked.
    #[serde(default)]
    pub blocks: Vec<String>,
}

impl DefaultSpec {
    pub fn new(scope: Content, conclusion: Content) -> Self {
        DefaultSpec {
            scope,
            conclusion,
            negated: false,
            exceptions: Vec::new(),
            surprise: 0.0,
            homogeneous: false,
            provenance: Provenance::Plain,
            blocks: Vec::new(),
        }
    }
}

/// The part of a move that an attack is aimed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    RuleItself,
    Prerequisite,
    ExceptionMembership,
    SurpriseMembership,
    SizeNotion,
    Conclusion,
    Applicability,
    ExpertLanguage,
}

impl Component {
    pub const ALL: [Component; 8] = [
        Component::RuleItself,
        Component::Prerequisite,
        Component::ExceptionMembership,
        Component::SurpriseMembership,
        Component::SizeNotion,
        Component::Conclusion,
        Component::Applicability,
        Component::ExpertLanguage,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Component::RuleItself => "rule-itself",
            Component::Prerequisite => "prerequisite",
            Component::ExceptionMembership => "exception-membership",
            Component::SurpriseMembership => "surprise-membership",
            Component::SizeNotion => "size-notion",
            Component::Conclusion => "conclusion",
            Component::Applicability => "applicability",
            Component::ExpertLanguage => "expert-language",
        }
    }
}

/// How an attack argues for `◊¬α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackMode {
    /// The premises refute `α`.
    ProveNegation,
    /// The premises are consistent with `¬α`.
    ArgueConsistentNegation,
    /// `α` with the premises yields the (unlikely) claim.
    Roundabout,
}

/// How a defense argues for `α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefenseMode {
    /// The premises are jointly satisfiable and entail `α`.
    Prove,
    /// The premises are consistent with `α`.
    ArgueConsistent,
}

/// Structured edit of a default, keeping the session and its default
/// theory in step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "edit", rename_all = "kebab-case")]
pub enum Edit {
    AddException { exception: String },
    MarkSurprise { budget: f64 },
    NarrowRule { scope: String },
    NegatePremise { premise: String },
    BlockInheritance { at: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackDescriptor {
    pub target: String,
    pub component: Component,
    pub mode: AttackMode,
    /// Derived consequence for roundabout attacks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<Content>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elaboration: Option<Edit>,
}

/// How the arbiter picks the culprit to attack or defend. `Manual` takes
/// the target named in the move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetPolicy {
    MaxFrequency,
    LastAsserted,
    Manual,
}

impl TargetPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            TargetPolicy::MaxFrequency => "max-frequency",
            TargetPolicy::LastAsserted => "last-asserted",
            TargetPolicy::Manual => "manual",
        }
    }
}

/// What a move does. Premises and justification links travel in
/// [`MoveRequest::based_on`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Action {
    AssertFact {
        content: Content,
    },
    AssertClassicalRule {
        content: Content,
    },
    AssertDefault {
        rule: DefaultSpec,
    },
    Attack {
        attack: AttackDescriptor,
    },
    Defend {
        target: String,
        mode: DefenseMode,
    },
    Elaborate {
        target: String,
        edit: Edit,
    },
    Confirm {
        target: String,
    },
    Agree {
        target: String,
    },
    ExpertOpinion {
        rule: DefaultSpec,
    },
    RetractProposal {
        target: String,
    },
    RetractVote {
        proposal: String,
        approve: bool,
    },
    ArbiterQuestion {
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<String>,
    },
    ArbiterTargetChoice {
        policy: TargetPolicy,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<String>,
    },
    Conclude,
}

impl Action {
    pub fn kind(&self) -> &'static str {
        match self {
            Action::AssertFact { .. } => "assert-fact",
            Action::AssertClassicalRule { .. } => "assert-classical-rule",
            Action::AssertDefault { .. } => "assert-default",
            Action::Attack { .. } => "attack",
            Action::Defend { .. } => "defend",
            Action::Elaborate { .. } => "elaborate",
            Action::Confirm { .. } => "confirm",
            Action::Agree { .. } => "agree",
            Action::ExpertOpinion { .. } => "expert-opinion",
            Action::RetractProposal { .. } => "retract-proposal",
            Action::RetractVote { .. } => "retract-vote",
            Action::ArbiterQuestion { .. } => "arbiter-question",
            Action::ArbiterTargetChoice { .. } => "arbiter-target-choice",
            Action::Conclude => "conclude",
        }
    }

    /// Moves whose content enters the arbiter's consistency check.
    pub fn is_assertive(&self) -> bool {
        matches!(
            self,
            Action::AssertFact { .. }
                | Action::AssertClassicalRule { .. }
                | Action::AssertDefault { .. }
                | Action::ExpertOpinion { .. }
        )
    }

    pub(crate) fn arbiter_only(&self) -> bool {
        matches!(
            self,
            Action::ArbiterQuestion { .. } | Action::ArbiterTargetChoice { .. } | Action::Conclude
        )
    }
}

/// A move as submitted; the session assigns the id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveRequest {
    pub author: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub based_on: Vec<String>,
    #[serde(flatten)]
    pub action: Action,
}

impl MoveRequest {
    pub fn new(author: impl Into<String>, action: Action) -> Self {
        MoveRequest {
            author: author.into(),
            label: None,
            based_on: Vec::new(),
            action,
        }
    }

    pub fn labelled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn based_on<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.based_on = ids.into_iter().map(Into::into).collect();
        self
    }
}

/// A committed move. References inside it are resolved to move ids.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub id: String,
    pub author: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub based_on: Vec<String>,
    #[serde(flatten)]
    pub action: Action,
}

impl Move {
    /// The label if there is one, otherwise the id.
    pub fn name(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.id)
    }
}
