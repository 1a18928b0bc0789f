use thiserror::Error;

/// Broad class of a failure, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input or a call outside an operation's preconditions.
    Usage,
    /// The instance itself violates an assumption (e.g. no truthful majority).
    Instance,
    /// A configured work budget or oracle bound was exceeded.
    Budget,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("operation requires {expected} graph")]
    WrongOrientation { expected: &'static str },

    #[error("graph is not regular (degree histogram {histogram:?})")]
    NotRegular { histogram: Vec<(usize, usize)> },

    #[error("delta {delta} outside admissible range {range}")]
    DeltaOutOfRange { delta: f64, range: &'static str },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("no {degree}-regular spanning subgraph found: {reason}")]
    NoRegularSubgraph { degree: usize, reason: String },

    #[error("world does not partition the vertex set: {0}")]
    InvalidWorld(String),

    #[error("report set does not match graph: {0}")]
    InvalidReports(String),

    #[error("invalid mirror pairing: {0}")]
    InvalidPairing(String),

    #[error("instance has {n} vertices, oracle bound is {bound}")]
    OracleBound { n: usize, bound: usize },

    #[error("no agreement component reaches the size threshold {threshold}")]
    NoLargeComponent { threshold: String },

    #[error("ambiguous instance: {0}")]
    AmbiguousInstance(String),

    #[error("propagated labels conflict at vertex {vertex}")]
    ConflictingLabels { vertex: usize },

    #[error("work budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("puzzle instance n={n}, t={t} has no truthful majority")]
    ImpossibleInstance { n: usize, t: usize },

    #[error("invalid gadget: {0}")]
    InvalidGadget(String),

    #[error("invalid separator: {0}")]
    InvalidSeparator(String),

    #[error("strategy protocol violation: {0}")]
    StrategyViolation(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NoLargeComponent { .. }
            | Error::AmbiguousInstance(_)
            | Error::ConflictingLabels { .. }
            | Error::ImpossibleInstance { .. }
            | Error::NoRegularSubgraph { .. } => ErrorClass::Instance,
            Error::BudgetExceeded { .. } | Error::OracleBound { .. } => ErrorClass::Budget,
            _ => ErrorClass::Usage,
        }
    }

    /// Short stable identifier, used in CSV output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::Parse { .. } => "Parse",
            Error::WrongOrientation { .. } => "WrongOrientation",
            Error::NotRegular { .. } => "NotRegular",
            Error::DeltaOutOfRange { .. } => "DeltaOutOfRange",
            Error::InvalidParameters(_) => "InvalidParameters",
            Error::NoRegularSubgraph { .. } => "NoRegularSubgraph",
            Error::InvalidWorld(_) => "InvalidWorld",
            Error::InvalidReports(_) => "InvalidReports",
            Error::InvalidPairing(_) => "InvalidPairing",
            Error::OracleBound { .. } => "OracleBound",
            Error::NoLargeComponent { .. } => "NoLargeComponent",
            Error::AmbiguousInstance(_) => "AmbiguousInstance",
            Error::ConflictingLabels { .. } => "ConflictingLabels",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::ImpossibleInstance { .. } => "ImpossibleInstance",
            Error::InvalidGadget(_) => "InvalidGadget",
            Error::InvalidSeparator(_) => "InvalidSeparator",
            Error::StrategyViolation(_) => "StrategyViolation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
