use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use super::inner::InnerOrder;
use super::{Placement, PreferenceConfig};
use crate::defaults::DefaultTheory;
use crate::error::{Error, Result};
use crate::hierarchy::Hierarchy;
use crate::logic::{ModelSet, Signature, Valuation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PacketKind {
    Mu,
    O,
}

/// A packet `μ(X)` or `o(X)`, naming the cell by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PacketId {
    pub cell: usize,
    pub kind: PacketKind,
}

impl PacketId {
    pub fn mu(cell: usize) -> Self {
        PacketId {
            cell,
            kind: PacketKind::Mu,
        }
    }

    pub fn o(cell: usize) -> Self {
        PacketId {
            cell,
            kind: PacketKind::O,
        }
    }

    fn node(self) -> usize {
        2 * self.cell + (self.kind == PacketKind::O) as usize
    }

    fn from_node(n: usize) -> Self {
        PacketId {
            cell: n / 2,
            kind: if n.is_multiple_of(2) { PacketKind::Mu } else { PacketKind::O },
        }
    }
}

/// A cell split into the members satisfying every valid default (`mu`) and
/// the rest (`o`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellPartition {
    pub code: String,
    pub mu: ModelSet,
    pub o: ModelSet,
    pub valid: BTreeSet<String>,
    #[serde(skip)]
    pub(crate) valid_indices: Vec<usize>,
}

/// Splits a cell: `mu` holds the members satisfying every valid
/// non-negated default's conclusion.
pub(crate) fn split_cell(
    theory: &DefaultTheory,
    code: &str,
    carrier: &ModelSet,
) -> Result<CellPartition> {
    let validity = theory.valid_at(carrier)?;
    let mut mu = carrier.clone();
    for &i in &validity.valid {
        if !theory.defaults()[i].is_negated() {
            mu.intersect_with(theory.conclusion_models(i));
        }
    }
    Ok(CellPartition {
        code: code.to_string(),
        o: carrier.difference(&mu),
        mu,
        valid: validity
            .valid
            .iter()
            .map(|&i| theory.defaults()[i].id.clone())
            .collect(),
        valid_indices: validity.valid,
    })
}

/// The packetwise order `⊑` and its extension to models: lower is more
/// normal. Empty packets are dropped after closing the order, so paths
/// through them are kept.
#[derive(Debug, Clone)]
pub struct ModelOrderRelation {
    pub hierarchy: Hierarchy,
    pub partitions: Vec<CellPartition>,
    pub config: PreferenceConfig,
    /// Pairs generated directly by the placement clauses, between non-empty
    /// packets.
    pub base_pairs: BTreeSet<(PacketId, PacketId)>,
    /// Transitive closure over all packets, restricted to non-empty ones.
    pub packet_pairs: BTreeSet<(PacketId, PacketId)>,
    inner: Vec<InnerOrder>,
    signature: Signature,
    /// Packet of every valuation, indexed by its bits.
    located: Vec<Option<PacketId>>,
}

impl ModelOrderRelation {
    pub fn build(theory: &DefaultTheory, config: &PreferenceConfig) -> Result<Self> {
        let hierarchy = Hierarchy::from_theory(theory)?;
        let mut partitions = Vec::with_capacity(hierarchy.cells.len());
        let mut inner = Vec::with_capacity(hierarchy.cells.len());
        for cell in &hierarchy.cells {
            let p = split_cell(theory, &cell.code, &cell.carrier)?;
            inner.push(InnerOrder::new(
                theory,
                &config.variant,
                &cell.carrier,
                &p.valid_indices,
            )?);
            partitions.push(p);
        }

        let n = hierarchy.cells.len();
        let all_base = base_clauses(&hierarchy, config.placement);
        let closure = close(2 * n, &all_base);
        for node in 0..2 * n {
            if closure[node].contains(node) {
                return Err(Error::OrderCycle(packet_label(
                    &hierarchy,
                    PacketId::from_node(node),
                )));
            }
        }
        let non_empty = |p: PacketId| match p.kind {
            PacketKind::Mu => !partitions[p.cell].mu.is_empty(),
            PacketKind::O => !partitions[p.cell].o.is_empty(),
        };
        let base_pairs = all_base
            .iter()
            .copied()
            .filter(|&(a, b)| non_empty(a) && non_empty(b))
            .collect();
        let mut packet_pairs = BTreeSet::new();
        for (from, succ) in closure.iter().enumerate() {
            let a = PacketId::from_node(from);
            if !non_empty(a) {
                continue;
            }
            for to in succ.ones() {
                let b = PacketId::from_node(to);
                if non_empty(b) {
                    packet_pairs.insert((a, b));
                }
            }
        }
        let mut located = vec![None; 1 << theory.signature().len()];
        for (c, p) in partitions.iter().enumerate() {
            for m in p.mu.iter() {
                located[m.bits() as usize] = Some(PacketId::mu(c));
            }
            for m in p.o.iter() {
                located[m.bits() as usize] = Some(PacketId::o(c));
            }
        }
        Ok(ModelOrderRelation {
            located,
            signature: theory.signature().clone(),
            hierarchy,
            partitions,
            config: config.clone(),
            base_pairs,
            packet_pairs,
            inner,
        })
    }

    pub fn universe(&self) -> &ModelSet {
        &self.hierarchy.family.universe
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn packet_models(&self, p: PacketId) -> &ModelSet {
        match p.kind {
            PacketKind::Mu => &self.partitions[p.cell].mu,
            PacketKind::O => &self.partitions[p.cell].o,
        }
    }

    /// Non-empty packets, by cell then `μ` before `o`.
    pub fn packets(&self) -> Vec<PacketId> {
        (0..self.partitions.len())
            .flat_map(|c| [PacketId::mu(c), PacketId::o(c)])
            .filter(|&p| !self.packet_models(p).is_empty())
            .collect()
    }

    pub fn packet_of(&self, m: Valuation) -> Option<PacketId> {
        if m.width() != self.signature.len() {
            return None;
        }
        self.located[m.bits() as usize]
    }

    /// `mu(CODE)` or `o(CODE)`; an empty code prints as `-`.
    pub fn label(&self, p: PacketId) -> String {
        packet_label(&self.hierarchy, p)
    }

    /// `m` better than `n` by the inner order of cell `cell`.
    pub(crate) fn inner_better(&self, cell: usize, m: Valuation, n: Valuation) -> bool {
        self.inner[cell].better(m, n)
    }

    /// `m ⊑ n`: `m` is strictly preferred to `n`.
    pub fn less(&self, m: Valuation, n: Valuation) -> bool {
        let (Some(pm), Some(pn)) = (self.packet_of(m), self.packet_of(n)) else {
            return false;
        };
        if pm == pn {
            return pm.kind == PacketKind::O && self.inner[pm.cell].better(m, n);
        }
        self.packet_pairs.contains(&(pm, pn))
    }

    /// Inner order pairs `(better, worse)` within `o` of one cell.
    pub fn inner_pairs(&self, cell: usize) -> Vec<(Valuation, Valuation)> {
        let o = &self.partitions[cell].o;
        let mut out = Vec::new();
        for m in o.iter() {
            for n in o.iter() {
                if self.inner[cell].better(m, n) {
                    out.push((m, n));
                }
            }
        }
        out
    }

    /// Every element pair `m ⊑ n`, materialized.
    pub fn element_pairs(&self) -> Vec<(Valuation, Valuation)> {
        let universe: Vec<Valuation> = self.universe().iter().collect();
        let mut out = Vec::new();
        for &m in &universe {
            for &n in &universe {
                if self.less(m, n) {
                    out.push((m, n));
                }
            }
        }
        out
    }

    /// Packet graph as text: `cell`, `packet`, `base`, `order` and
    /// optionally `element` sections, each sorted line by line.
    pub fn dump(&self, with_elements: bool) -> String {
        let mut sections: Vec<Vec<String>> = Vec::new();
        sections.push(
            self.partitions
                .iter()
                .map(|p| {
                    let valid: Vec<&str> = p.valid.iter().map(String::as_str).collect();
                    let code = if p.code.is_empty() { "-" } else { &p.code };
                    format!("cell {code} valid {{{}}}", valid.join(", "))
                })
                .collect(),
        );
        sections.push(
            self.packets()
                .into_iter()
                .map(|p| format!("packet {} {}", self.label(p), self.packet_models(p)))
                .collect(),
        );
        for (name, pairs) in [("base", &self.base_pairs), ("order", &self.packet_pairs)] {
            sections.push(
                pairs
                    .iter()
                    .map(|(a, b)| format!("{name} {} < {}", self.label(*a), self.label(*b)))
                    .collect(),
            );
        }
        if with_elements {
            sections.push(
                self.element_pairs()
                    .into_iter()
                    .map(|(m, n)| format!("element {m} < {n}"))
                    .collect(),
            );
        }
        let mut out = String::new();
        for mut lines in sections {
            lines.sort();
            for l in lines {
                out.push_str(&l);
                out.push('\n');
            }
        }
        out
    }
}

impl Serialize for PacketId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{self}"))
    }
}

impl fmt::Display for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            PacketKind::Mu => "mu",
            PacketKind::O => "o",
        };
        write!(f, "{kind}#{}", self.cell)
    }
}

fn packet_label(h: &Hierarchy, p: PacketId) -> String {
    let code = &h.cells[p.cell].code;
    let code = if code.is_empty() { "-" } else { code };
    match p.kind {
        PacketKind::Mu => format!("mu({code})"),
        PacketKind::O => format!("o({code})"),
    }
}

/// Base pairs over all `2n` packets, empty or not.
fn base_clauses(h: &Hierarchy, placement: Placement) -> BTreeSet<(PacketId, PacketId)> {
    let n = h.cells.len();
    let mut pairs = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            if h.order.below(x, y) {
                pairs.insert((PacketId::mu(x), PacketId::mu(y)));
            }
            match placement {
                Placement::Successor => {
                    if h.order.below(x, y) || x == y || h.order.direct(y, x) {
                        pairs.insert((PacketId::mu(x), PacketId::o(y)));
                    }
                }
                Placement::Radical => {
                    pairs.insert((PacketId::mu(x), PacketId::o(y)));
                    if h.order.below(x, y) {
                        pairs.insert((PacketId::o(x), PacketId::o(y)));
                    }
                }
            }
        }
    }
    pairs
}

/// Reachability sets of the transitive closure.
fn close(nodes: usize, pairs: &BTreeSet<(PacketId, PacketId)>) -> Vec<FixedBitSet> {
    let mut succ = vec![Vec::new(); nodes];
    for (a, b) in pairs {
        succ[a.node()].push(b.node());
    }
    (0..nodes)
        .map(|start| {
            let mut seen = FixedBitSet::with_capacity(nodes);
            let mut stack: Vec<usize> = succ[start].clone();
            while let Some(n) = stack.pop() {
                if !seen.put(n) {
                    stack.extend(&succ[n]);
                }
            }
            seen
        })
        .collect()
}
