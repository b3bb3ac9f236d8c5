//! Serializable projections of a session for clients.

use std::collections::{BTreeMap, BTreeSet};

use dialectic_core::inconsistency::InconsistencyReport;
use dialectic_core::preference::{Classification, ModelOrderRelation, PacketKind};
use dialectic_core::ModelSet;
use serde::Serialize;

use crate::error::Result;
use crate::moves::{Component, Move};
use crate::session::{Event, Phase, Proposal, Session, Status, Verdict};

/// What changed-state clients need after a move.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Delta<'a> {
    pub phase: Phase,
    pub report: &'a InconsistencyReport,
    pub retracted: &'a BTreeSet<String>,
    pub hanging: &'a BTreeSet<String>,
    pub status: &'a BTreeMap<String, Status>,
    pub proposal: &'a Option<Proposal>,
    pub target: &'a Option<String>,
    pub verdict: &'a Option<Verdict>,
}

impl<'a> Delta<'a> {
    pub fn of(s: &'a Session) -> Self {
        Delta {
            phase: s.phase,
            report: &s.report,
            retracted: &s.retracted,
            hanging: &s.hanging,
            status: &s.status,
            proposal: &s.proposal,
            target: &s.target,
            verdict: &s.verdict,
        }
    }
}

/// Response to a committed move.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoveOutcome<'a> {
    #[serde(rename = "move")]
    pub committed: Move,
    pub events: Vec<Event>,
    pub delta: Delta<'a>,
}

/// Full session state plus the attack components legal against each
/// surviving assertion.
#[derive(Debug, Clone, Serialize)]
pub struct StateView<'a> {
    #[serde(flatten)]
    pub session: &'a Session,
    pub legal_attacks: BTreeMap<String, Vec<Component>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
}

impl<'a> StateView<'a> {
    pub fn of(session: &'a Session) -> Self {
        let legal_attacks = session
            .surviving()
            .map(|m| (m.id.clone(), session.legal_components(&m.id)))
            .collect();
        StateView {
            session,
            legal_attacks,
            classification: session.classification().ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellView {
    pub index: usize,
    pub code: String,
    pub expression: String,
    pub size: usize,
    pub valid: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacketView {
    pub label: String,
    pub cell: usize,
    pub kind: &'static str,
    pub models: ModelSet,
}

/// Cells, the Hasse diagram of `⊴`, and the non-empty packets with their
/// order, for drawing the hierarchy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyView {
    pub cells: Vec<CellView>,
    pub hasse: Vec<(usize, usize)>,
    pub order: Vec<(usize, usize)>,
    pub packets: Vec<PacketView>,
    pub packet_pairs: Vec<(String, String)>,
}

impl HierarchyView {
    pub fn of(session: &Session) -> Result<Self> {
        let theory = session.theory()?;
        let r = ModelOrderRelation::build(&theory, &session.config.preference)?;
        let cells = r
            .hierarchy
            .cells
            .iter()
            .zip(&r.partitions)
            .enumerate()
            .map(|(index, (c, p))| CellView {
                index,
                code: c.code.clone(),
                expression: c.expression.clone(),
                size: c.size,
                valid: p.valid.clone(),
            })
            .collect();
        let packets = r
            .packets()
            .into_iter()
            .map(|p| PacketView {
                label: r.label(p),
                cell: p.cell,
                kind: match p.kind {
                    PacketKind::Mu => "mu",
                    PacketKind::O => "o",
                },
                models: r.packet_models(p).clone(),
            })
            .collect();
        Ok(HierarchyView {
            cells,
            hasse: r.hierarchy.order.hasse.iter().copied().collect(),
            order: r.hierarchy.order.pairs.iter().copied().collect(),
            packets,
            packet_pairs: r
                .packet_pairs
                .iter()
                .map(|&(a, b)| (r.label(a), r.label(b)))
                .collect(),
        })
    }
}
