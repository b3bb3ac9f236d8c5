use serde::Serialize;

use super::order::{ModelOrderRelation, PacketId, PacketKind};
use crate::error::{Error, Result};
use crate::logic::{models, Formula, ModelSet, Signature};

/// Minimal models of a query found in one packet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub packet: String,
    pub models: ModelSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsequenceVerdict {
    pub holds: bool,
    pub minimal_models: ModelSet,
    pub witnesses: Vec<Witness>,
}

/// Where an individual described by some facts is placed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Codes of the selected cells.
    pub cells: Vec<String>,
    /// Labels of the selected packets, one per cell.
    pub packets: Vec<String>,
    pub models: ModelSet,
    /// Literals true in every selected model.
    pub conclusions: Vec<String>,
    /// The conclusions that the facts and background alone do not entail.
    pub defeasible: Vec<String>,
}

/// Literals true throughout a non-empty model set, in signature order.
fn common_literals(set: &ModelSet, sig: &Signature) -> Vec<String> {
    (0..sig.len())
        .filter_map(|i| {
            let mut values = set.iter().map(|v| v.value(i));
            let first = values.next()?;
            if values.all(|x| x == first) {
                Some(if first {
                    sig.name(i).to_string()
                } else {
                    format!("~{}", sig.name(i))
                })
            } else {
                None
            }
        })
        .collect()
}

impl ModelOrderRelation {
    fn query_set(&self, gamma: &Formula) -> Result<ModelSet> {
        let set = models(gamma, self.signature())?.intersection(self.universe());
        if set.is_empty() {
            return Err(Error::EmptyQuery(gamma.to_text(self.signature())));
        }
        Ok(set)
    }

    /// The `⊑`-minimal members of `set` (intersected with the universe),
    /// grouped by packet.
    pub fn minimal_in(&self, set: &ModelSet) -> Vec<(PacketId, ModelSet)> {
        let set = set.intersection(self.universe());
        let hit: Vec<PacketId> = self
            .packets()
            .into_iter()
            .filter(|&p| self.packet_models(p).intersects(&set))
            .collect();
        hit.iter()
            .copied()
            .filter(|&p| !hit.iter().any(|&q| q != p && self.packet_pairs.contains(&(q, p))))
            .map(|p| {
                let here = self.packet_models(p).intersection(&set);
                let picked = match p.kind {
                    PacketKind::Mu => here,
                    PacketKind::O => ModelSet::from_valuations(
                        here.width(),
                        here.iter()
                            .filter(|&m| !here.iter().any(|n| self.inner_better(p.cell, n, m))),
                    ),
                };
                (p, picked)
            })
            .collect()
    }

    /// Models of `gamma` with no strictly preferred model of `gamma`.
    pub fn minimal_models(&self, gamma: &Formula) -> Result<ModelSet> {
        let set = self.query_set(gamma)?;
        let mut out = ModelSet::empty(set.width());
        for (_, m) in self.minimal_in(&set) {
            out.union_with(&m);
        }
        Ok(out)
    }

    /// `gamma ∼ psi`: every minimal model of `gamma` satisfies `psi`.
    pub fn default_holds(&self, gamma: &Formula, psi: &Formula) -> Result<ConsequenceVerdict> {
        let set = self.query_set(gamma)?;
        let target = models(psi, self.signature())?;
        let groups = self.minimal_in(&set);
        let mut minimal = ModelSet::empty(set.width());
        for (_, m) in &groups {
            minimal.union_with(m);
        }
        Ok(ConsequenceVerdict {
            holds: minimal.is_subset(&target),
            witnesses: groups
                .into_iter()
                .map(|(p, models)| Witness {
                    packet: self.label(p),
                    models,
                })
                .collect(),
            minimal_models: minimal,
        })
    }

    /// Places an individual as low as possible: in the `⊴`-minimal cells
    /// consistent with the facts, in `μ` when the facts allow it and
    /// otherwise among the best members of `o`. Ties between incomparable
    /// cells are joined.
    pub fn classify(&self, facts: &[Formula]) -> Result<Classification> {
        let mut set = self.universe().clone();
        for f in facts {
            set.intersect_with(&models(f, self.signature())?);
        }
        if set.is_empty() {
            return Err(Error::InconsistentFacts);
        }
        let cells = &self.hierarchy.cells;
        let hit: Vec<usize> = (0..cells.len())
            .filter(|&c| cells[c].carrier.intersects(&set))
            .collect();
        let lowest: Vec<usize> = hit
            .iter()
            .copied()
            .filter(|&c| !hit.iter().any(|&d| self.hierarchy.order.below(d, c)))
            .collect();

        let mut chosen = ModelSet::empty(set.width());
        let mut packets = Vec::new();
        for &c in &lowest {
            let mu = self.partitions[c].mu.intersection(&set);
            if !mu.is_empty() {
                chosen.union_with(&mu);
                packets.push(self.label(PacketId::mu(c)));
            } else {
                let o = self.partitions[c].o.intersection(&set);
                chosen.union_with(&ModelSet::from_valuations(
                    o.width(),
                    o.iter().filter(|&m| !o.iter().any(|n| self.inner_better(c, n, m))),
                ));
                packets.push(self.label(PacketId::o(c)));
            }
        }
        let conclusions = common_literals(&chosen, self.signature());
        let given = common_literals(&set, self.signature());
        Ok(Classification {
            cells: lowest.iter().map(|&c| cells[c].code.clone()).collect(),
            packets,
            defeasible: conclusions
                .iter()
                .filter(|l| !given.contains(l))
                .cloned()
                .collect(),
            conclusions,
            models: chosen,
        })
    }
}
