//! The arbiter's session: commitments, culprit reports, retraction rounds,
//! attack/defense bookkeeping and the final verdict.

use std::collections::{BTreeMap, BTreeSet};

use dialectic_core::defaults::{parse_theory, Provenance, SpecificityOrder};
use dialectic_core::inconsistency::{analyze, InconsistencyReport, DEFAULT_UNIT_CAP};
use dialectic_core::logic::models;
use dialectic_core::preference::{Classification, ModelOrderRelation, PreferenceConfig};
use dialectic_core::size::SizePolicy;
use dialectic_core::{DefaultTheory, Formula};
use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::domain::{ArbiterFamily, Domain, Unit, UnitRole};
use crate::error::{ProtocolError, Result};
use crate::moves::{
    Action, AttackDescriptor, AttackMode, Component, Content, DefaultSpec, DefenseMode, Edit, Move,
    MoveRequest, Participant, Role, TargetPolicy,
};

fn default_unit_cap() -> usize {
    DEFAULT_UNIT_CAP
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Mode {
    Intensional {
        atoms: Vec<String>,
        #[serde(default)]
        background: Vec<String>,
        /// Explicit `(stronger, weaker)` pairs by default name.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        prefer: Vec<(String, String)>,
    },
    Extensional {
        domain: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub participants: Vec<Participant>,
    #[serde(flatten)]
    pub mode: Mode,
    #[serde(default)]
    pub policy: SizePolicy<f64>,
    #[serde(default)]
    pub preference: PreferenceConfig,
    #[serde(default = "default_unit_cap")]
    pub unit_cap: usize,
}

impl SessionConfig {
    pub fn new(participants: Vec<Participant>, mode: Mode) -> Self {
        SessionConfig {
            participants,
            mode,
            policy: SizePolicy::standard(),
            preference: PreferenceConfig::default(),
            unit_cap: DEFAULT_UNIT_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Open,
    RetractionVote,
    AttackDefense,
    Failed,
    Closed,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Open => "open",
            Phase::RetractionVote => "retraction-vote",
            Phase::AttackDefense => "attack-defense",
            Phase::Failed => "failed",
            Phase::Closed => "closed",
        }
    }
}

/// Latest attack/defense standing of a move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Contested,
    Defended,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposal {
    pub id: String,
    pub target: String,
    pub votes: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Consistent,
    DeadlockFailure,
    ClosedByAgreement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    /// The minimal inconsistent set whose members are all defended.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deadlocked: Option<Vec<String>>,
    /// Assertive moves that were never retracted.
    pub surviving: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum Event {
    Committed {
        id: String,
        kind: String,
    },
    Culprits {
        last: String,
        last_in_all: bool,
        mis: Vec<Vec<String>>,
        frequencies: BTreeMap<String, usize>,
    },
    PhaseChanged {
        from: Phase,
        to: Phase,
    },
    ProposalOpened {
        proposal: String,
        target: String,
    },
    VoteRecorded {
        proposal: String,
        voter: String,
        approve: bool,
    },
    RetractionRejected {
        proposal: String,
        by: String,
    },
    Retracted {
        target: String,
        hanging: Vec<String>,
    },
    Cleaned,
    TargetChosen {
        target: String,
        policy: TargetPolicy,
    },
    StatusChanged {
        target: String,
        status: Status,
    },
    /// The payload names a component with no semantic content to check.
    Unverified {
        id: String,
        reason: String,
    },
    TheoryEdited {
        target: String,
        edit: Edit,
    },
    ProvenanceChanged {
        target: String,
        provenance: Provenance,
    },
    VerdictReached {
        verdict: Verdict,
    },
}

/// One argumentation session. Every field is a pure function of the config
/// and the committed moves, so replaying the moves reproduces it exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Session {
    pub config: SessionConfig,
    pub moves: Vec<Move>,
    /// Events emitted by each move, aligned with `moves`.
    pub events: Vec<Vec<Event>>,
    pub phase: Phase,
    pub report: InconsistencyReport,
    pub retracted: BTreeSet<String>,
    pub hanging: BTreeSet<String>,
    pub status: BTreeMap<String, Status>,
    /// Current form of every asserted default, after elaborations.
    pub defaults: BTreeMap<String, DefaultSpec>,
    pub proposal: Option<Proposal>,
    pub target: Option<String>,
    /// Participants who agreed since the culprits last changed.
    pub agreed: BTreeSet<String>,
    pub verdict: Option<Verdict>,
    #[serde(skip)]
    domain: Domain,
}

impl Session {
    pub fn open(config: SessionConfig) -> Result<Self> {
        let arbiters = config
            .participants
            .iter()
            .filter(|p| p.role == Role::Arbiter)
            .count();
        if arbiters != 1 {
            return Err(ProtocolError::ArbiterCount(arbiters));
        }
        if config.participants.len() < 2 {
            return Err(ProtocolError::NoParticipants);
        }
        let mut seen = BTreeSet::new();
        for p in &config.participants {
            if !seen.insert(p.id.as_str()) {
                return Err(ProtocolError::DuplicateParticipant(p.id.clone()));
            }
        }
        let p = &config.policy;
        SizePolicy::new(p.most, p.small, p.very_small)?;
        let domain = Domain::compile(&config.mode)?;
        Ok(Session {
            config,
            moves: Vec::new(),
            events: Vec::new(),
            phase: Phase::Open,
            report: InconsistencyReport::empty(Vec::<String>::new()),
            retracted: BTreeSet::new(),
            hanging: BTreeSet::new(),
            status: BTreeMap::new(),
            defaults: BTreeMap::new(),
            proposal: None,
            target: None,
            agreed: BTreeSet::new(),
            verdict: None,
            domain,
        })
    }

    /// The config and arbiter moves that preload a theory file: defaults
    /// become assertions labelled by their ids, blocks become elaborations.
    pub fn seed_plan(
        participants: Vec<Participant>,
        preference: PreferenceConfig,
        theory_text: &str,
    ) -> Result<(SessionConfig, Vec<MoveRequest>)> {
        let theory = parse_theory(theory_text)?;
        let sig = theory.signature();
        let prefer = match theory.specificity() {
            SpecificityOrder::ScopeInclusion => Vec::new(),
            SpecificityOrder::Explicit(pairs) => pairs.clone(),
        };
        let mut config = SessionConfig::new(
            participants,
            Mode::Intensional {
                atoms: sig.atoms().to_vec(),
                background: theory.background().iter().map(|f| f.to_text(sig)).collect(),
                prefer,
            },
        );
        config.policy = *theory.policy();
        config.preference = preference;
        let arbiter = config
            .participants
            .iter()
            .find(|p| p.role == Role::Arbiter)
            .map(|p| p.id.clone())
            .ok_or(ProtocolError::ArbiterCount(0))?;

        let mut requests = Vec::new();
        for rule in theory.defaults() {
            let mut spec = DefaultSpec::new(
                Content::Formula(rule.scope.to_text(sig)),
                Content::Formula(rule.conclusion.to_text(sig)),
            );
            spec.negated = rule.is_negated();
            spec.exceptions = rule.exceptions.iter().map(|e| e.to_text(sig)).collect();
            spec.surprise = rule.surprise_budget;
            spec.homogeneous = rule.homogeneous;
            spec.provenance = rule.provenance;
            requests.push(
                MoveRequest::new(arbiter.clone(), Action::AssertDefault { rule: spec })
                    .labelled(rule.id.clone()),
            );
        }
        for block in theory.blocks() {
            requests.push(MoveRequest::new(
                arbiter.clone(),
                Action::Elaborate {
                    target: block.default_id.clone(),
                    edit: Edit::BlockInheritance {
                        at: block.at.to_text(sig),
                    },
                },
            ));
        }
        Ok((config, requests))
    }

    /// Opens a session preloaded with a theory file.
    pub fn seeded(
        participants: Vec<Participant>,
        preference: PreferenceConfig,
        theory_text: &str,
    ) -> Result<Self> {
        let (config, requests) = Self::seed_plan(participants, preference, theory_text)?;
        let mut session = Session::open(config)?;
        for r in requests {
            session.submit(r)?;
        }
        Ok(session)
    }

    pub fn participant(&self, id: &str) -> Result<&Participant> {
        self.config
            .participants
            .iter()
            .find(|p| p.id == id)
            .ok_or_else(|| ProtocolError::UnknownParticipant(id.to_string()))
    }

    fn voters(&self) -> impl Iterator<Item = &Participant> {
        self.config
            .participants
            .iter()
            .filter(|p| p.role == Role::Participant)
    }

    /// Index of a move named by id or label.
    pub fn resolve(&self, reference: &str) -> Result<usize> {
        self.moves
            .iter()
            .position(|m| m.id == reference || m.label.as_deref() == Some(reference))
            .ok_or_else(|| ProtocolError::UnknownMove(reference.to_string()))
    }

    pub fn get(&self, reference: &str) -> Option<&Move> {
        self.resolve(reference).ok().map(|i| &self.moves[i])
    }

    fn id_of(&self, reference: &str) -> Result<String> {
        Ok(self.moves[self.resolve(reference)?].id.clone())
    }

    /// Assertive moves that have not been retracted, in commit order.
    pub fn surviving(&self) -> impl Iterator<Item = &Move> {
        self.moves
            .iter()
            .filter(|m| m.action.is_assertive() && !self.retracted.contains(&m.id))
    }

    /// Commits a move and returns it with the arbiter's events. On error the
    /// session is left unchanged.
    pub fn submit(&mut self, request: MoveRequest) -> Result<(Move, Vec<Event>)> {
        let mut next = self.clone();
        let out = next.apply(request)?;
        *self = next;
        Ok(out)
    }

    fn apply(&mut self, request: MoveRequest) -> Result<(Move, Vec<Event>)> {
        if self.verdict.is_some() {
            return Err(ProtocolError::Finished(self.phase.as_str().into()));
        }
        let kind = request.action.kind();
        let author = self.participant(&request.author)?.clone();
        let seeding = !self
            .moves
            .iter()
            .any(|m| self.participant(&m.author).map(|p| p.role) == Ok(Role::Participant));
        let permitted = match author.role {
            Role::Arbiter => {
                request.action.arbiter_only()
                    || (seeding
                        && (request.action.is_assertive()
                            || matches!(request.action, Action::Elaborate { .. })))
            }
            Role::Participant => !request.action.arbiter_only(),
        };
        if !permitted {
            return Err(ProtocolError::RoleViolation {
                kind: kind.into(),
                role: author.role.as_str().into(),
                author: author.id,
            });
        }
        if !self.phase_permits(&request.action) {
            return Err(ProtocolError::PhaseViolation {
                kind: kind.into(),
                phase: self.phase.as_str().into(),
            });
        }
        let based_on = request
            .based_on
            .iter()
            .map(|r| {
                let id = self.id_of(r)?;
                if self.retracted.contains(&id) {
                    return Err(ProtocolError::Retracted(r.clone()));
                }
                Ok(id)
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(label) = &request.label {
            self.check_label(label)?;
        }
        let action = self.resolve_action(request.action)?;
        let mv = Move {
            id: format!("m{}", self.moves.len() + 1),
            author: request.author,
            label: request.label,
            based_on,
            action,
        };
        let mut events = vec![Event::Committed {
            id: mv.id.clone(),
            kind: kind.into(),
        }];
        if mv.based_on.iter().any(|b| self.hanging.contains(b)) {
            self.hanging.insert(mv.id.clone());
        }
        self.moves.push(mv.clone());
        self.effects(&mv, &mut events)?;
        self.events.push(events.clone());
        Ok((mv, events))
    }

    fn phase_permits(&self, action: &Action) -> bool {
        use Action::*;
        let assertive = action.is_assertive();
        match self.phase {
            Phase::Open => {
                assertive
                    || matches!(
                        action,
                        Attack { .. }
                            | Defend { .. }
                            | Elaborate { .. }
                            | Confirm { .. }
                            | Agree { .. }
                            | ArbiterQuestion { .. }
                            | Conclude
                    )
            }
            Phase::RetractionVote => matches!(
                action,
                RetractProposal { .. }
                    | RetractVote { .. }
                    | ArbiterTargetChoice { .. }
                    | ArbiterQuestion { .. }
                    | Confirm { .. }
                    | Agree { .. }
                    | Conclude
            ),
            Phase::AttackDefense => !matches!(action, RetractVote { .. }),
            Phase::Failed | Phase::Closed => false,
        }
    }

    fn check_label(&self, label: &str) -> Result<()> {
        let well_formed = label
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && label
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
        let looks_like_id =
            label.len() > 1 && label.starts_with('m') && label[1..].chars().all(|c| c.is_ascii_digit());
        if !well_formed || looks_like_id || self.get(label).is_some() {
            return Err(ProtocolError::BadLabel(label.to_string()));
        }
        Ok(())
    }

    /// Replaces move references in the payload by move ids.
    fn resolve_action(&self, action: Action) -> Result<Action> {
        Ok(match action {
            Action::Attack { mut attack } => {
                attack.target = self.id_of(&attack.target)?;
                Action::Attack { attack }
            }
            Action::Defend { target, mode } => Action::Defend {
                target: self.id_of(&target)?,
                mode,
            },
            Action::Elaborate { target, edit } => Action::Elaborate {
                target: self.id_of(&target)?,
                edit,
            },
            Action::Confirm { target } => Action::Confirm {
                target: self.id_of(&target)?,
            },
            Action::Agree { target } => Action::Agree {
                target: self.id_of(&target)?,
            },
            Action::RetractProposal { target } => Action::RetractProposal {
                target: self.id_of(&target)?,
            },
            Action::RetractVote { proposal, approve } => Action::RetractVote {
                proposal: self.id_of(&proposal)?,
                approve,
            },
            Action::ArbiterQuestion { text, target } => Action::ArbiterQuestion {
                text,
                target: target.map(|t| self.id_of(&t)).transpose()?,
            },
            Action::ArbiterTargetChoice { policy, target } => Action::ArbiterTargetChoice {
                policy,
                target: target.map(|t| self.id_of(&t)).transpose()?,
            },
            other => other,
        })
    }

    fn effects(&mut self, mv: &Move, events: &mut Vec<Event>) -> Result<()> {
        match &mv.action {
            Action::AssertFact { content } | Action::AssertClassicalRule { content } => {
                self.domain.carrier(content)?;
                self.refresh_after(&mv.id, events)?;
            }
            Action::AssertDefault { rule } | Action::ExpertOpinion { rule } => {
                let mut spec = rule.clone();
                if matches!(mv.action, Action::ExpertOpinion { .. }) {
                    spec.provenance = Provenance::Expert;
                }
                self.domain
                    .validate_default(&spec, mv.name(), &self.config.policy)?;
                self.defaults.insert(mv.id.clone(), spec);
                self.refresh_after(&mv.id, events)?;
            }
            Action::Attack { attack } => self.attack(mv, attack, events)?,
            Action::Defend { target, mode } => self.defend(mv, target, *mode, events)?,
            Action::Elaborate { target, edit } => self.elaborate(target, edit, events)?,
            Action::Confirm { target } => self.endorse(target, Provenance::Confirmed, events)?,
            Action::Agree { target } => {
                self.endorse(target, Provenance::Agreed, events)?;
                self.agreed.insert(mv.author.clone());
            }
            Action::RetractProposal { target } => {
                if let Some(p) = &self.proposal {
                    return Err(ProtocolError::ProposalOpen(p.id.clone()));
                }
                if !self.report.culprits().contains(target.as_str()) {
                    return Err(ProtocolError::NotACulprit(target.clone()));
                }
                self.proposal = Some(Proposal {
                    id: mv.id.clone(),
                    target: target.clone(),
                    votes: BTreeMap::new(),
                });
                events.push(Event::ProposalOpened {
                    proposal: mv.id.clone(),
                    target: target.clone(),
                });
                self.set_phase(Phase::RetractionVote, events);
            }
            Action::RetractVote { proposal, approve } => {
                self.vote(&mv.author, proposal, *approve, events)?
            }
            Action::ArbiterQuestion { .. } => {}
            Action::ArbiterTargetChoice { policy, target } => {
                if let Some(p) = &self.proposal {
                    return Err(ProtocolError::ProposalOpen(p.id.clone()));
                }
                let chosen = self.choose_target(*policy, target.as_deref())?;
                self.target = Some(chosen.clone());
                events.push(Event::TargetChosen {
                    target: chosen,
                    policy: *policy,
                });
                self.set_phase(Phase::AttackDefense, events);
                self.check_deadlock(events);
            }
            Action::Conclude => {
                let outcome = if self.report.is_consistent() {
                    Outcome::Consistent
                } else if self.voters().all(|p| self.agreed.contains(&p.id)) {
                    Outcome::ClosedByAgreement
                } else {
                    return Err(ProtocolError::NoAgreement);
                };
                self.finish(outcome, None, Phase::Closed, events);
            }
        }
        Ok(())
    }

    fn set_phase(&mut self, to: Phase, events: &mut Vec<Event>) {
        if self.phase != to {
            events.push(Event::PhaseChanged {
                from: self.phase,
                to,
            });
            self.phase = to;
        }
    }

    fn finish(
        &mut self,
        outcome: Outcome,
        deadlocked: Option<Vec<String>>,
        phase: Phase,
        events: &mut Vec<Event>,
    ) {
        let verdict = Verdict {
            outcome,
            deadlocked,
            surviving: self.surviving().map(|m| m.id.clone()).collect(),
        };
        self.set_phase(phase, events);
        self.verdict = Some(verdict.clone());
        events.push(Event::VerdictReached { verdict });
    }

    fn units(&self) -> Result<ArbiterFamily> {
        let mut units = Vec::new();
        for m in self.surviving() {
            let (role, carrier) = match &m.action {
                Action::AssertFact { content } => (UnitRole::Fact, self.domain.carrier(content)?),
                Action::AssertClassicalRule { content } => {
                    (UnitRole::Rule, self.domain.carrier(content)?)
                }
                _ => (
                    UnitRole::Default,
                    self.domain.default_carrier(&self.defaults[&m.id])?,
                ),
            };
            units.push(Unit {
                id: m.id.clone(),
                role,
                carrier,
            });
        }
        Ok(ArbiterFamily {
            universe: self.domain.universe(),
            units,
        })
    }

    fn recompute(&mut self) -> Result<()> {
        let report = analyze(&self.units()?, self.config.unit_cap)?;
        if report.mis != self.report.mis {
            self.agreed.clear();
        }
        self.report = report;
        if let Some(t) = &self.target {
            if !self.report.culprits().contains(t.as_str()) {
                self.target = None;
            }
        }
        Ok(())
    }

    /// Recomputes the report after `id` changed and announces the minimal
    /// inconsistent sets it newly takes part in.
    fn refresh_after(&mut self, id: &str, events: &mut Vec<Event>) -> Result<()> {
        let before = self.report.mis.clone();
        self.recompute()?;
        let fresh = self
            .report
            .mis
            .iter()
            .any(|set| set.iter().any(|m| m == id) && !before.contains(set));
        if fresh {
            events.push(Event::Culprits {
                last: id.to_string(),
                last_in_all: self.report.last_argument_check(id)?,
                mis: self.report.mis.clone(),
                frequencies: self.report.frequencies.clone(),
            });
            self.set_phase(Phase::RetractionVote, events);
        }
        Ok(())
    }

    fn arguable(&self, target: &str) -> Result<&Move> {
        let m = &self.moves[self.resolve(target)?];
        if !m.action.is_assertive() {
            return Err(ProtocolError::NotArguable(target.to_string()));
        }
        if self.retracted.contains(&m.id) {
            return Err(ProtocolError::Retracted(target.to_string()));
        }
        Ok(m)
    }

    /// Components an attack on the move may aim at.
    pub fn legal_components(&self, id: &str) -> Vec<Component> {
        let Some(m) = self.get(id) else {
            return Vec::new();
        };
        match &m.action {
            Action::AssertFact { .. } => vec![Component::Conclusion],
            Action::AssertClassicalRule { .. } => vec![Component::Prerequisite],
            Action::AssertDefault { .. } | Action::ExpertOpinion { .. } => {
                if self.defaults.get(&m.id).map(|d| d.provenance) == Some(Provenance::Expert) {
                    vec![Component::Conclusion, Component::ExpertLanguage]
                } else {
                    Component::ALL
                        .into_iter()
                        .filter(|&c| c != Component::ExpertLanguage)
                        .collect()
                }
            }
            _ => Vec::new(),
        }
    }

    /// Joint content of the premises within the background; only facts and
    /// classical rules may serve as premises.
    fn premise_set(&self, premises: &[String], target: &str) -> Result<FixedBitSet> {
        let mut base = self.domain.universe();
        for p in premises {
            let m = &self.moves[self.resolve(p)?];
            if m.id == target {
                return Err(ProtocolError::Malformed(format!("`{p}` is the target itself")));
            }
            if self.retracted.contains(&m.id) {
                return Err(ProtocolError::Retracted(p.clone()));
            }
            match &m.action {
                Action::AssertFact { content } | Action::AssertClassicalRule { content } => {
                    base.intersect_with(&self.domain.carrier(content)?);
                }
                _ => {
                    return Err(ProtocolError::Malformed(format!(
                        "premise `{p}` is not a fact or classical rule"
                    )))
                }
            }
        }
        Ok(base)
    }

    /// The proposition `α` an attack on `component` of `m` argues against,
    /// if the component has checkable content.
    fn attacked_content(&self, m: &Move, component: Component) -> Result<Option<FixedBitSet>> {
        Ok(match (&m.action, component) {
            (Action::AssertFact { content }, _) => Some(self.domain.carrier(content)?),
            (Action::AssertClassicalRule { content }, _) => match content {
                Content::Formula(text) => match self.domain.formula(text)? {
                    Formula::Implies(antecedent, _) => {
                        Some(models(&antecedent, self.domain.signature()?)?.as_bits().clone())
                    }
                    _ => Some(self.domain.carrier(content)?),
                },
                Content::Elements(_) => Some(self.domain.carrier(content)?),
            },
            (_, c) => {
                let spec = &self.defaults[&m.id];
                match c {
                    Component::RuleItself => Some(self.domain.default_carrier(spec)?),
                    Component::Prerequisite => Some(self.domain.carrier(&spec.scope)?),
                    Component::Conclusion => Some(self.domain.conclusion_carrier(spec)?),
                    Component::ExceptionMembership => Some(self.domain.outside_exceptions(spec)?),
                    _ => None,
                }
            }
        })
    }

    fn defended_content(&self, m: &Move) -> Result<FixedBitSet> {
        match &m.action {
            Action::AssertFact { content } | Action::AssertClassicalRule { content } => {
                self.domain.carrier(content)
            }
            _ => self.domain.default_carrier(&self.defaults[&m.id]),
        }
    }

    fn attack(&mut self, mv: &Move, attack: &AttackDescriptor, events: &mut Vec<Event>) -> Result<()> {
        let target = self.arguable(&attack.target)?.clone();
        if !self.legal_components(&target.id).contains(&attack.component) {
            return Err(ProtocolError::IllegalComponent {
                component: attack.component.as_str().into(),
                target: target.action.kind().into(),
            });
        }
        let base = self.premise_set(&mv.based_on, &target.id)?;
        // The attack is judged against the default as it proposes to edit it.
        if let Some(edit) = &attack.elaboration {
            self.elaborate(&target.id, edit, events)?;
        }
        match self.attacked_content(&target, attack.component)? {
            None => events.push(Event::Unverified {
                id: mv.id.clone(),
                reason: format!("component `{}` has no checkable content", attack.component.as_str()),
            }),
            Some(alpha) => {
                let mut hit = base.clone();
                hit.intersect_with(&alpha);
                let ok = match attack.mode {
                    AttackMode::ProveNegation => hit.is_clear(),
                    AttackMode::ArgueConsistentNegation => !base.is_subset(&alpha),
                    AttackMode::Roundabout => {
                        let claim = attack.claim.as_ref().ok_or_else(|| {
                            ProtocolError::Malformed("roundabout attack needs a claim".into())
                        })?;
                        hit.is_subset(&self.domain.carrier(claim)?)
                    }
                };
                if !ok {
                    return Err(ProtocolError::CheckFailed(match attack.mode {
                        AttackMode::ProveNegation => "premises do not refute the target".into(),
                        AttackMode::ArgueConsistentNegation => {
                            "premises entail the target, so its negation is not consistent".into()
                        }
                        AttackMode::Roundabout => {
                            "the claim does not follow from the target and the premises".into()
                        }
                    }));
                }
            }
        }
        self.status.insert(target.id.clone(), Status::Contested);
        events.push(Event::StatusChanged {
            target: target.id.clone(),
            status: Status::Contested,
        });
        Ok(())
    }

    fn defend(&mut self, mv: &Move, target: &str, mode: DefenseMode, events: &mut Vec<Event>) -> Result<()> {
        let m = self.arguable(target)?.clone();
        let alpha = self.defended_content(&m)?;
        let base = self.premise_set(&mv.based_on, &m.id)?;
        let ok = match mode {
            DefenseMode::Prove => !base.is_clear() && base.is_subset(&alpha),
            DefenseMode::ArgueConsistent => !base.is_disjoint(&alpha),
        };
        if !ok {
            return Err(ProtocolError::CheckFailed(match mode {
                DefenseMode::Prove => "premises do not entail the target".into(),
                DefenseMode::ArgueConsistent => "premises contradict the target".into(),
            }));
        }
        self.status.insert(m.id.clone(), Status::Defended);
        events.push(Event::StatusChanged {
            target: m.id.clone(),
            status: Status::Defended,
        });
        if self.phase == Phase::AttackDefense {
            self.check_deadlock(events);
        }
        Ok(())
    }

    fn elaborate(&mut self, target: &str, edit: &Edit, events: &mut Vec<Event>) -> Result<()> {
        let m = self.arguable(target)?.clone();
        let mut spec = self
            .defaults
            .get(&m.id)
            .cloned()
            .ok_or_else(|| ProtocolError::Malformed(format!("`{target}` is not a default")))?;
        self.domain.signature()?;
        let conjoin = |scope: &Content, extra: String| -> Result<Content> {
            match scope {
                Content::Formula(text) => Ok(Content::Formula(format!("({text}) & ({extra})"))),
                Content::Elements(_) => Err(ProtocolError::NotIntensional),
            }
        };
        match edit {
            Edit::AddException { exception } => spec.exceptions.push(exception.clone()),
            Edit::MarkSurprise { budget } => spec.surprise = *budget,
            Edit::NarrowRule { scope } => spec.scope = conjoin(&spec.scope, scope.clone())?,
            Edit::NegatePremise { premise } => {
                spec.scope = conjoin(&spec.scope, format!("~({premise})"))?
            }
            Edit::BlockInheritance { at } => spec.blocks.push(at.clone()),
        }
        self.domain
            .validate_default(&spec, m.name(), &self.config.policy)?;
        self.defaults.insert(m.id.clone(), spec);
        events.push(Event::TheoryEdited {
            target: m.id.clone(),
            edit: edit.clone(),
        });
        self.refresh_after(&m.id, events)
    }

    fn endorse(&mut self, target: &str, provenance: Provenance, events: &mut Vec<Event>) -> Result<()> {
        let id = self.id_of(target)?;
        if self.retracted.contains(&id) {
            return Err(ProtocolError::Retracted(target.to_string()));
        }
        if let Some(spec) = self.defaults.get_mut(&id) {
            if spec.provenance != Provenance::Expert && spec.provenance != provenance {
                spec.provenance = provenance;
                events.push(Event::ProvenanceChanged {
                    target: id,
                    provenance,
                });
            }
        }
        Ok(())
    }

    fn vote(&mut self, voter: &str, proposal: &str, approve: bool, events: &mut Vec<Event>) -> Result<()> {
        let open = match &mut self.proposal {
            Some(p) if p.id == proposal => p,
            _ => return Err(ProtocolError::NoSuchProposal(proposal.to_string())),
        };
        if open.votes.contains_key(voter) {
            return Err(ProtocolError::DoubleVote(voter.to_string()));
        }
        open.votes.insert(voter.to_string(), approve);
        let open = open.clone();
        events.push(Event::VoteRecorded {
            proposal: open.id.clone(),
            voter: voter.to_string(),
            approve,
        });
        if !approve {
            self.proposal = None;
            events.push(Event::RetractionRejected {
                proposal: open.id,
                by: voter.to_string(),
            });
            return Ok(());
        }
        if self.voters().all(|p| open.votes.get(&p.id) == Some(&true)) {
            self.proposal = None;
            self.retract(&open.target, events)?;
        }
        Ok(())
    }

    fn retract(&mut self, target: &str, events: &mut Vec<Event>) -> Result<()> {
        self.retracted.insert(target.to_string());
        self.status.remove(target);
        self.recompute()?;
        self.hanging = self.hanging_moves();
        events.push(Event::Retracted {
            target: target.to_string(),
            hanging: self.hanging.iter().cloned().collect(),
        });
        if self.report.is_consistent() {
            events.push(Event::Cleaned);
            self.target = None;
            self.set_phase(Phase::Open, events);
        }
        Ok(())
    }

    /// Moves with a chain of `based_on` links to a retracted move.
    pub fn hanging_moves(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in &self.moves {
            if self.retracted.contains(&m.id) {
                continue;
            }
            if m.based_on
                .iter()
                .any(|b| self.retracted.contains(b) || out.contains(b))
            {
                out.insert(m.id.clone());
            }
        }
        out
    }

    /// The culprit to attack or defend next.
    pub fn choose_target(&self, policy: TargetPolicy, manual: Option<&str>) -> Result<String> {
        if self.report.is_consistent() {
            return Err(ProtocolError::NoCulprits);
        }
        let culprits = self.report.culprits();
        let order = |id: &str| self.resolve(id).unwrap_or(0);
        let pick = match policy {
            TargetPolicy::MaxFrequency => culprits
                .iter()
                .max_by_key(|id| (self.report.frequency(id), order(id))),
            TargetPolicy::LastAsserted => culprits.iter().max_by_key(|id| order(id)),
            TargetPolicy::Manual => {
                let name = manual.ok_or_else(|| {
                    ProtocolError::Malformed("manual target choice needs a target".into())
                })?;
                let id = self.id_of(name)?;
                return if culprits.contains(id.as_str()) {
                    Ok(id)
                } else {
                    Err(ProtocolError::NotACulprit(id))
                };
            }
        };
        Ok(pick.expect("report is not consistent").to_string())
    }

    /// A failure verdict iff some minimal inconsistent set has every member
    /// defended.
    pub fn detect_deadlock(&self) -> Option<Verdict> {
        let set = self.report.mis.iter().find(|set| {
            set.iter()
                .all(|id| self.status.get(id) == Some(&Status::Defended))
        })?;
        Some(Verdict {
            outcome: Outcome::DeadlockFailure,
            deadlocked: Some(set.clone()),
            surviving: self.surviving().map(|m| m.id.clone()).collect(),
        })
    }

    fn check_deadlock(&mut self, events: &mut Vec<Event>) {
        if let Some(v) = self.detect_deadlock() {
            self.finish(v.outcome, v.deadlocked, Phase::Failed, events);
        }
    }

    /// The default theory of the surviving commitments: the background plus
    /// surviving classical rules, with surviving defaults attached under
    /// their names. Rules that contradict the background are left out, as
    /// are defaults that no longer attach.
    pub fn theory(&self) -> Result<DefaultTheory> {
        let sig = self.domain.signature()?.clone();
        let background = self.domain.background().to_vec();
        let mut with_rules = background.clone();
        for m in self.surviving() {
            if let Action::AssertClassicalRule {
                content: Content::Formula(text),
            } = &m.action
            {
                with_rules.push(self.domain.formula(text)?);
            }
        }
        let mut theory = DefaultTheory::new(sig.clone(), with_rules)?;
        if theory.universe().is_empty() {
            theory = DefaultTheory::new(sig, background)?;
        }
        theory = theory.with_policy(self.config.policy);
        for m in self.surviving() {
            let Some(spec) = self.defaults.get(&m.id) else {
                continue;
            };
            let Ok(next) = theory.attach(self.domain.rule(spec, m.name())?) else {
                continue;
            };
            theory = next;
            for b in &spec.blocks {
                if let Ok(next) = theory.block_inheritance(m.name(), self.domain.formula(b)?) {
                    theory = next;
                }
            }
        }
        if let Mode::Intensional { prefer, .. } = &self.config.mode {
            let pairs: Vec<(String, String)> = prefer
                .iter()
                .filter(|(a, b)| theory.index_of(a).is_some() && theory.index_of(b).is_some())
                .cloned()
                .collect();
            if !pairs.is_empty() {
                theory = theory.with_specificity(SpecificityOrder::Explicit(pairs));
            }
        }
        Ok(theory)
    }

    /// Where the surviving facts place the individual under discussion.
    pub fn classification(&self) -> Result<Classification> {
        let theory = self.theory()?;
        let order = ModelOrderRelation::build(&theory, &self.config.preference)?;
        let mut facts = Vec::new();
        for m in self.surviving() {
            if let Action::AssertFact {
                content: Content::Formula(text),
            } = &m.action
            {
                facts.push(self.domain.formula(text)?);
            }
        }
        Ok(order.classify(&facts)?)
    }
}
