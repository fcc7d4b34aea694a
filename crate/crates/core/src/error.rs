use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The computation outgrew its configured budget. The instance is too
    /// large, the answer is not wrong.
    #[error("{what} budget exceeded (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("vertex `{0}` is neither a source nor a sink")]
    NotSourceOrSink(String),

    #[error("cannot remove vertex `{vertex}`: {reason}")]
    PreconditionViolated { vertex: String, reason: String },

    #[error("not an exceptional sequence: {0}")]
    NotExceptional(String),

    #[error("reflection at `{vertex}` produced negative dimension {value}")]
    ReflectionIllegal { vertex: String, value: i64 },

    #[error("stage {stage}: entry {entry} expected {expected}, got {actual}")]
    StageMismatch {
        stage: &'static str,
        entry: String,
        expected: String,
        actual: String,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid kostka instance: {0}")]
    InvalidKostkaInstance(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
