//! The preferential order on models.
//!
//! Each cell is split into `μ`, the members satisfying every default valid
//! in the cell, and `o`, the remaining unexcused exceptions. Packets are
//! ordered by the cell hierarchy; the members of an `o` packet are ordered
//! among themselves by how well they satisfy the valid defaults.

mod inner;
mod order;
mod query;

pub use inner::InnerVariant;
pub use order::{CellPartition, ModelOrderRelation, PacketId, PacketKind};
pub use query::{Classification, ConsequenceVerdict, Witness};

use serde::{Deserialize, Serialize};

/// Where the `o` packets sit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Placement {
    /// `μ(X) ⊑ o(Y)` iff `X ⊴ Y`, `X = Y`, or `X` is a direct successor of
    /// `Y`. Nothing sits above an `o` packet.
    #[default]
    Successor,
    /// Every `o` packet sits above every `μ` packet, and `o` packets are
    /// ordered among themselves by the cell hierarchy.
    Radical,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PreferenceConfig {
    pub variant: InnerVariant,
    pub placement: Placement,
}

impl PreferenceConfig {
    pub fn new(variant: InnerVariant) -> Self {
        PreferenceConfig {
            variant,
            placement: Placement::Successor,
        }
    }

    pub fn radical(mut self) -> Self {
        self.placement = Placement::Radical;
        self
    }
}
