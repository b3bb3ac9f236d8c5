//! Arbiter-mediated argumentation sessions.
//!
//! Participants commit typed moves; after each one the arbiter recomputes
//! the minimal inconsistent sets of the surviving assertions, runs
//! unanimous retraction rounds, tracks attacks and defenses of the
//! culprits, and declares failure when some culprit set is fully defended.

mod domain;
pub mod error;
pub mod http;
pub mod moves;
pub mod service;
pub mod session;
pub mod transcript;
pub mod view;

pub use error::{ProtocolError, Result};
pub use moves::{
    Action, AttackDescriptor, AttackMode, Component, Content, DefaultSpec, DefenseMode, Edit, Move,
    MoveRequest, Participant, Role, TargetPolicy,
};
pub use service::{OpenRequest, SeedRequest, SessionRegistry};
pub use session::{Event, Mode, Outcome, Phase, Session, SessionConfig, Status, Verdict};
