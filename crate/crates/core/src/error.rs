use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("undeclared atom `{0}`")]
    UndeclaredAtom(String),

    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),

    #[error("duplicate atom `{0}` in signature")]
    DuplicateAtom(String),

    #[error("signature has {atoms} atoms, above the enumeration cap of {cap}")]
    SignatureTooLarge { atoms: usize, cap: usize },

    #[error("family has {units} units, above the analysis cap of {cap}")]
    TooManyUnits { units: usize, cap: usize },

    #[error("unknown unit `{0}`")]
    UnknownUnit(String),

    #[error("duplicate unit id `{0}`")]
    DuplicateUnit(String),

    #[error("unit `{0}` does not match the family mode")]
    MixedFamily(String),

    #[error("element `{0}` is not in the declared domain")]
    UnknownElement(String),

    #[error("duplicate default id `{0}`")]
    DuplicateDefault(String),

    #[error("unknown default `{0}`")]
    UnknownDefault(String),

    #[error("default `{0}` has an unsatisfiable scope")]
    UnsatisfiableScope(String),

    #[error("exception set of default `{id}` is not contained in its scope: {exception}")]
    ExceptionOutsideScope { id: String, exception: String },

    #[error("surprise budget {budget} of default `{id}` exceeds the very-small bound {bound}")]
    SurpriseBudget { id: String, budget: f64, bound: f64 },

    #[error("block for default `{id}` is not contained in its scope")]
    BlockOutsideScope { id: String },

    #[error("point `{0}` is unsatisfiable together with the background theory")]
    UnsatisfiablePoint(String),

    #[error("size policy out of range: {0}")]
    InvalidSizePolicy(String),

    #[error("theory violates the consistency conditions: {0}")]
    ConditionsViolated(String),

    #[error("priority list does not mention valid default `{0}`")]
    IncompletePriority(String),

    #[error("cycle in the model order through packet {0}")]
    OrderCycle(String),

    #[error("query `{0}` has no models inside the universe")]
    EmptyQuery(String),

    #[error("facts are inconsistent with the background theory")]
    InconsistentFacts,

    #[error("theory file line {line}: {message}")]
    TheoryFormat { line: usize, message: String },
}
