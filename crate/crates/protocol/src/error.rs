use thiserror::Error;

pub type Result<T, E = ProtocolError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("session needs exactly one arbiter, found {0}")]
    ArbiterCount(usize),

    #[error("session needs at least one participant besides the arbiter")]
    NoParticipants,

    #[error("duplicate participant id `{0}`")]
    DuplicateParticipant(String),

    #[error("unknown participant `{0}`")]
    UnknownParticipant(String),

    #[error("unknown move `{0}`")]
    UnknownMove(String),

    #[error("label `{0}` is invalid or already in use")]
    BadLabel(String),

    #[error("`{kind}` is not permitted in phase `{phase}`")]
    PhaseViolation { kind: String, phase: String },

    #[error("`{kind}` may not be made by {role} `{author}`")]
    RoleViolation {
        kind: String,
        role: String,
        author: String,
    },

    #[error("session is finished ({0}); no further moves are accepted")]
    Finished(String),

    #[error("malformed payload: {0}")]
    Malformed(String),

    #[error("component `{component}` cannot be attacked on a `{target}` move")]
    IllegalComponent { component: String, target: String },

    #[error("move `{0}` cannot be attacked or defended")]
    NotArguable(String),

    #[error("move `{0}` has been retracted")]
    Retracted(String),

    #[error("move `{0}` is not in any minimal inconsistent set")]
    NotACulprit(String),

    #[error("there are no minimal inconsistent sets")]
    NoCulprits,

    #[error("retraction proposal `{0}` is still open")]
    ProposalOpen(String),

    #[error("`{0}` is not the open retraction proposal")]
    NoSuchProposal(String),

    #[error("participant `{0}` has already voted")]
    DoubleVote(String),

    #[error("payload check failed: {0}")]
    CheckFailed(String),

    #[error("closing with open culprits needs agreement from every participant")]
    NoAgreement,

    #[error("this operation needs an intensional session")]
    NotIntensional,

    #[error("unknown session `{0}`")]
    UnknownSession(String),

    #[error("transcript line {line}: {message}")]
    Transcript { line: usize, message: String },

    #[error("unsupported transcript version `{0}`")]
    VersionMismatch(String),

    #[error(transparent)]
    Core(#[from] dialectic_core::Error),
}

impl ProtocolError {
    pub(crate) fn transcript(line: usize, message: impl Into<String>) -> Self {
        ProtocolError::Transcript {
            line,
            message: message.into(),
        }
    }
}
