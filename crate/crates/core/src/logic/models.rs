use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use super::Signature;

/// One truth value per signature atom, packed with the first atom as the
/// most significant bit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation {
    bits: u32,
    width: u8,
}

impl Valuation {
    pub fn new(bits: u32, width: usize) -> Self {
        debug_assert!(width <= 32 && (width == 32 || bits >> width == 0));
        Valuation {
            bits,
            width: width as u8,
        }
    }

    /// Parses a bitstring such as `"101"`.
    pub fn from_bitstring(s: &str) -> Option<Self> {
        if s.len() > 32 || !s.chars().all(|c| c == '0' || c == '1') {
            return None;
        }
        let bits = if s.is_empty() {
            0
        } else {
            u32::from_str_radix(s, 2).ok()?
        };
        Some(Valuation::new(bits, s.len()))
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    /// Truth value of the atom at `position` in signature order.
    pub fn value(self, position: usize) -> bool {
        debug_assert!(position < self.width());
        (self.bits >> (self.width() - 1 - position)) & 1 == 1
    }

    /// Conjunction of literals, e.g. `b & ~p & f`.
    pub fn describe(self, sig: &Signature) -> String {
        if self.width == 0 {
            return "true".to_string();
        }
        (0..self.width())
            .map(|i| {
                if self.value(i) {
                    sig.name(i).to_string()
                } else {
                    format!("~{}", sig.name(i))
                }
            })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width() {
            f.write_str(if self.value(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Valuation({self})")
    }
}

/// A set of valuations over one signature, stored densely over all
/// `2^width` valuations so that set algebra is exact and cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModelSet {
    width: u8,
    members: FixedBitSet,
}

impl ModelSet {
    pub fn empty(width: usize) -> Self {
        ModelSet {
            width: width as u8,
            members: FixedBitSet::with_capacity(1 << width),
        }
    }

    /// All `2^width` valuations.
    pub fn universe(width: usize) -> Self {
        let mut set = Self::empty(width);
        set.members.insert_range(..);
        set
    }

    pub fn from_valuations<I: IntoIterator<Item = Valuation>>(width: usize, vals: I) -> Self {
        let mut set = Self::empty(width);
        for v in vals {
            set.insert(v);
        }
        set
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn insert(&mut self, v: Valuation) {
        assert_eq!(v.width(), self.width(), "valuation width mismatch");
        self.members.insert(v.bits() as usize);
    }

    pub fn contains(&self, v: Valuation) -> bool {
        v.width() == self.width() && self.members.contains(v.bits() as usize)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    /// Members in ascending bit order.
    pub fn iter(&self) -> impl Iterator<Item = Valuation> + '_ {
        let width = self.width();
        self.members.ones().map(move |b| Valuation::new(b as u32, width))
    }

    fn check(&self, other: &ModelSet) {
        assert_eq!(self.width, other.width, "model sets over different signatures");
    }

    pub fn union(&self, other: &ModelSet) -> ModelSet {
        self.check(other);
        let mut out = self.clone();
        out.members.union_with(&other.members);
        out
    }

    pub fn intersection(&self, other: &ModelSet) -> ModelSet {
        self.check(other);
        let mut out = self.clone();
        out.members.intersect_with(&other.members);
        out
    }

    pub fn difference(&self, other: &ModelSet) -> ModelSet {
        self.check(other);
        let mut out = self.clone();
        out.members.difference_with(&other.members);
        out
    }

    pub fn complement(&self) -> ModelSet {
        let mut out = self.clone();
        out.members.toggle_range(..);
        out
    }

    pub fn intersect_with(&mut self, other: &ModelSet) {
        self.check(other);
        self.members.intersect_with(&other.members);
    }

    pub fn union_with(&mut self, other: &ModelSet) {
        self.check(other);
        self.members.union_with(&other.members);
    }

    pub fn difference_with(&mut self, other: &ModelSet) {
        self.check(other);
        self.members.difference_with(&other.members);
    }

    pub fn is_subset(&self, other: &ModelSet) -> bool {
        self.check(other);
        self.members.is_subset(&other.members)
    }

    pub fn is_strict_subset(&self, other: &ModelSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(&self, other: &ModelSet) -> bool {
        self.check(other);
        self.members.is_disjoint(&other.members)
    }

    pub fn intersects(&self, other: &ModelSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn as_bits(&self) -> &FixedBitSet {
        &self.members
    }

    /// Sorted bitstrings, e.g. `["00", "01", "11"]`.
    pub fn bitstrings(&self) -> Vec<String> {
        self.iter().map(|v| v.to_string()).collect()
    }
}

impl fmt::Display for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.bitstrings().join(", "))
    }
}

impl fmt::Debug for ModelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModelSet{self}")
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Serialized as the sorted list of member bitstrings.
impl Serialize for ModelSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|v| v.to_string()))
    }
}
