//! Relevant sets, the finest cells they induce, and the exceptionality order
//! on cells.
//!
//! Everything here depends only on the sets defaults are attached to, never
//! on which defaults sit there. Bit `i` of a cell code is `1` iff the cell
//! lies inside family member `i`; members keep declaration order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::defaults::DefaultTheory;
use crate::error::{Error, Result};
use crate::logic::ModelSet;

/// Cap on family members; the relevant-set scan visits `3^k` builder pairs.
pub const FAMILY_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub label: String,
    pub models: ModelSet,
}

/// The distinct sets defaults are attached to, inside the universe `U`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachmentFamily {
    pub members: Vec<FamilyMember>,
    pub universe: ModelSet,
}

impl AttachmentFamily {
    pub fn new(universe: ModelSet, members: Vec<FamilyMember>) -> Result<Self> {
        let mut labels = BTreeSet::new();
        for m in &members {
            if !labels.insert(m.label.as_str()) {
                return Err(Error::DuplicateUnit(m.label.clone()));
            }
            if !m.models.is_subset(&universe) {
                return Err(Error::UnknownUnit(m.label.clone()));
            }
        }
        if members.len() > FAMILY_CAP {
            return Err(Error::TooManyUnits {
                units: members.len(),
                cap: FAMILY_CAP,
            });
        }
        Ok(AttachmentFamily { members, universe })
    }

    /// One member per distinct scope model set, labelled by the first scope
    /// attached there, followed by the sets where inheritance is blocked
    /// (labelled `block:ID`). Scopes covering the whole universe split
    /// nothing and are left out.
    pub fn from_theory(theory: &DefaultTheory) -> Result<Self> {
        let universe = theory.universe().clone();
        let mut members: Vec<FamilyMember> = Vec::new();
        let mut push = |label: String, models: &ModelSet| {
            if models.is_empty() || *models == universe {
                return;
            }
            if members.iter().any(|m| m.models == *models) {
                return;
            }
            let mut label = label;
            while members.iter().any(|m| m.label == label) {
                label.push('\'');
            }
            members.push(FamilyMember {
                label,
                models: models.clone(),
            });
        };
        for (i, d) in theory.defaults().iter().enumerate() {
            push(d.scope.to_text(theory.signature()), theory.scope_models(i));
        }
        for b in theory.blocks() {
            push(format!("block:{}", b.default_id), b.models());
        }
        AttachmentFamily::new(universe, members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership mask of every universe element, bit `i` for member `i`.
    fn membership(&self) -> BTreeMap<u32, ModelSet> {
        let mut classes: BTreeMap<u32, ModelSet> = BTreeMap::new();
        for v in self.universe.iter() {
            let mask = self
                .members
                .iter()
                .enumerate()
                .filter(|(_, m)| m.models.contains(v))
                .fold(0u32, |acc, (i, _)| acc | (1 << i));
            classes
                .entry(mask)
                .or_insert_with(|| ModelSet::empty(self.universe.width()))
                .insert(v);
        }
        classes
    }

    fn code_string(&self, mask: u32) -> String {
        (0..self.len())
            .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    /// Set expression `X - Y_1 - Y_2`, with `X` an intersection of member
    /// labels or `U`.
    fn expression(&self, x: &[usize], y: &[usize]) -> String {
        let mut out = if x.is_empty() {
            "U".to_string()
        } else {
            x.iter()
                .map(|&i| self.members[i].label.as_str())
                .collect::<Vec<_>>()
                .join(" & ")
        };
        for &j in y {
            let _ = write!(out, " - {}", self.members[j].label);
        }
        out
    }
}

/// `(⋂ builders_x) − (⋃ builders_y)`, with the canonical builders: every
/// member containing the carrier, and every member disjoint from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevantSet {
    pub carrier: ModelSet,
    pub builders_x: Vec<usize>,
    pub builders_y: Vec<usize>,
    /// Shortest builder expression with this carrier.
    pub expression: String,
}

/// A finest relevant set with its membership code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    #[serde(skip)]
    pub carrier: ModelSet,
    pub code: String,
    #[serde(skip)]
    pub mask: u32,
    pub expression: String,
    pub size: usize,
}

/// `X ⊴ Y` on cells (by index), and its transitive reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HierarchyOrder {
    pub pairs: BTreeSet<(usize, usize)>,
    pub hasse: BTreeSet<(usize, usize)>,
}

impl HierarchyOrder {
    pub fn below(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    pub fn direct(&self, x: usize, y: usize) -> bool {
        self.hasse.contains(&(x, y))
    }
}

/// Carrier of `X − Y` over the membership classes, as a bit set over class
/// indices.
fn class_carrier(masks: &[u32], x: u32, y: u32) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(masks.len());
    for (c, &m) in masks.iter().enumerate() {
        if m & x == x && m & y == 0 {
            bits.insert(c);
        }
    }
    bits
}

fn bit_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// Every non-empty `X − Y` with `X` an intersection and `Y` a union of
/// family members, deduplicated by carrier. Sorted by decreasing size, then
/// by carrier.
pub fn relevant_sets(fam: &AttachmentFamily) -> Vec<RelevantSet> {
    let classes = fam.membership();
    let masks: Vec<u32> = classes.keys().copied().collect();
    let k = fam.len();

    // Shortest (|X| + |Y|, then X, then Y) builder pair per carrier.
    let mut best: BTreeMap<Vec<usize>, (usize, u32, u32)> = BTreeMap::new();
    let mut digits = vec![0u8; k];
    loop {
        let (mut x, mut y) = (0u32, 0u32);
        for (i, &d) in digits.iter().enumerate() {
            match d {
                1 => x |= 1 << i,
                2 => y |= 1 << i,
                _ => {}
            }
        }
        let bits = class_carrier(&masks, x, y);
        if !bits.is_clear() {
            let key: Vec<usize> = bits.ones().collect();
            let size = (x.count_ones() + y.count_ones()) as usize;
            let rank = (size, bit_indices(x), bit_indices(y));
            best.entry(key)
                .and_modify(|cur| {
                    if rank < (cur.0, bit_indices(cur.1), bit_indices(cur.2)) {
                        *cur = (size, x, y);
                    }
                })
                .or_insert((size, x, y));
        }
        // Next base-3 digit vector.
        let mut i = 0;
        while i < k && digits[i] == 2 {
            digits[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
        digits[i] += 1;
    }

    let mut out: Vec<RelevantSet> = best
        .into_iter()
        .map(|(key, (_, x, y))| {
            let mut carrier = ModelSet::empty(fam.universe.width());
            for c in &key {
                carrier.union_with(&classes[&masks[*c]]);
            }
            let builders_x = (0..k).filter(|&i| carrier.is_subset(&fam.members[i].models)).collect();
            let builders_y = (0..k).filter(|&i| carrier.is_disjoint(&fam.members[i].models)).collect();
            RelevantSet {
                expression: fam.expression(&bit_indices(x), &bit_indices(y)),
                carrier,
                builders_x,
                builders_y,
            }
        })
        .collect();
    out.sort_by(|a, b| b.carrier.len().cmp(&a.carrier.len()).then(a.carrier.cmp(&b.carrier)));
    out
}

/// The ⊆-minimal relevant sets, coded and sorted by number of ones, then
/// by code.
pub fn finest_cells(fam: &AttachmentFamily, relevant: &[RelevantSet]) -> Vec<Cell> {
    let mut cells: Vec<Cell> = relevant
        .iter()
        .filter(|r| {
            !relevant
                .iter()
                .any(|s| s.carrier.is_strict_subset(&r.carrier))
        })
        .map(|r| {
            let mask = r.builders_x.iter().fold(0u32, |m, &i| m | (1 << i));
            Cell {
                carrier: r.carrier.clone(),
                code: fam.code_string(mask),
                mask,
                expression: r.expression.clone(),
                size: r.carrier.len(),
            }
        })
        .collect();
    cells.sort_by(|a, b| {
        a.mask
            .count_ones()
            .cmp(&b.mask.count_ones())
            .then_with(|| b.code.cmp(&a.code))
    });
    cells
}

/// `X ⊴ Y` iff the members containing `X` are a strict subset of those
/// containing `Y`.
pub fn cell_order(cells: &[Cell]) -> HierarchyOrder {
    let mut pairs = BTreeSet::new();
    for (i, x) in cells.iter().enumerate() {
        for (j, y) in cells.iter().enumerate() {
            if x.mask != y.mask && x.mask & y.mask == x.mask {
                pairs.insert((i, j));
            }
        }
    }
    let hasse = pairs
        .iter()
        .copied()
        .filter(|&(i, j)| {
            !(0..cells.len()).any(|k| pairs.contains(&(i, k)) && pairs.contains(&(k, j)))
        })
        .collect();
    HierarchyOrder { pairs, hasse }
}

/// Family, relevant sets, cells and their order for one theory.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub family: AttachmentFamily,
    pub relevant: Vec<RelevantSet>,
    pub cells: Vec<Cell>,
    pub order: HierarchyOrder,
}

impl Hierarchy {
    pub fn build(family: AttachmentFamily) -> Self {
        let relevant = relevant_sets(&family);
        let cells = finest_cells(&family, &relevant);
        let order = cell_order(&cells);
        Hierarchy {
            family,
            relevant,
            cells,
            order,
        }
    }

    pub fn from_theory(theory: &DefaultTheory) -> Result<Self> {
        Ok(Self::build(AttachmentFamily::from_theory(theory)?))
    }

    pub fn cell_by_code(&self, code: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.code == code)
    }

    /// The cell containing a universe element.
    pub fn cell_of(&self, v: crate::logic::Valuation) -> Option<usize> {
        self.cells.iter().position(|c| c.carrier.contains(v))
    }

    /// Lines `code TAB set-expression TAB size`; an empty code prints `-`.
    pub fn cell_table(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let code = if c.code.is_empty() { "-" } else { &c.code };
            let _ = writeln!(out, "{code}\t{}\t{}", c.expression, c.size);
        }
        out
    }

    /// Graph description of the cells and the direct-successor edges,
    /// pointing from the less to the more exceptional cell.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph hierarchy {\n  rankdir=BT;\n");
        for (i, c) in self.cells.iter().enumerate() {
            let _ = writeln!(
                out,
                "  c{i} [label=\"{}\\n{}\"];",
                if c.code.is_empty() { "-" } else { &c.code },
                c.expression
            );
        }
        for &(i, j) in &self.order.hasse {
            let _ = writeln!(out, "  c{i} -> c{j};");
        }
        out.push_str("}\n");
        out
    }
}
