use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("duplicate event `{0}`")]
    DuplicateEvent(String),
    #[error("invalid event identifier `{0}`")]
    InvalidEventId(String),
    #[error("too many events: {0} (at most 64 are supported)")]
    TooManyEvents(usize),
    #[error("causality cycle through {}", .0.join(" < "))]
    CausalityCycle(Vec<String>),
    #[error("event `{0}` is in conflict with itself")]
    SelfConflict(String),
    #[error("forbidden set {0} must contain at least two events")]
    ForbiddenTooSmall(String),
    #[error("rule {premise} |- {conclusion} is inconsistent")]
    InconsistentRule { premise: String, conclusion: String },
    #[error("rule {premise} |- {conclusion} contains its own conclusion")]
    ReflexiveRule { premise: String, conclusion: String },
    #[error("stability violated for `{event}`: enablings {first} and {second} are jointly consistent")]
    StabilityViolation {
        event: String,
        first: String,
        second: String,
    },
    #[error("{0} is not a configuration")]
    NotAConfiguration(String),
    #[error("event `{event}` is not in configuration {config}")]
    EventNotInConfiguration { event: String, config: String },
    #[error("{0} is not R-stopped")]
    NotRStopped(String),
    #[error("not generable from a binary conflict relation; witness {0}")]
    NotBinaryGenerable(String),
    #[error("morphism is not total: `{0}` has no image")]
    MorphismNotTotal(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("distribution error: {0}")]
    Distribution(String),
    #[error("measure error: {0}")]
    Measure(String),
    #[error("net error: {0}")]
    Net(String),
    #[error("net is not 1-safe; witness firing sequence {}", .0.join(" "))]
    UnsafeNet(Vec<String>),
    #[error("maximum event count must be positive")]
    ZeroMaxEvents,
    #[error("structure too large for exhaustive analysis: {0}")]
    TooLarge(String),
    #[error("missing header")]
    MissingHeader,
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Located {
        line: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Line number attached to a parse or located validation error.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::Syntax { line, .. } | Error::Located { line, .. } => Some(*line),
            _ => None,
        }
    }
}
