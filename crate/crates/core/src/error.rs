//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("label {0} occurs more than once")]
    DuplicateLabel(String),
    #[error("label {0} is not covered by any pair")]
    UncoveredLabel(String),
    #[error("label {0} is not in the carrier")]
    UnknownLabel(String),
    #[error("label {0} is paired with itself")]
    SelfPair(String),
    #[error("shared set mismatch: {0}")]
    SharedSetMismatch(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("palette mismatch: {0}")]
    PaletteMismatch(String),
    #[error("closed cycle with incoherent colours: {0}")]
    IncoherentCycleColour(String),
    #[error("invalid colouring: {0}")]
    InvalidColouring(String),
    #[error("diagram is not oriented: {0}")]
    NotOriented(String),
    #[error("block mismatch: {0}")]
    BlockMismatch(String),
    #[error("colour mismatch: {0}")]
    ColourMismatch(String),
    #[error("index error: {0}")]
    IndexError(String),
    #[error("arity bound exceeded: {0}")]
    ArityBoundExceeded(String),
    #[error("no action entry: {0}")]
    MissingAction(String),
    #[error("invalid table: {0}")]
    InvalidTable(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("not a graph morphism: {0}")]
    NotAMorphism(String),
    #[error("{0} is not a port")]
    NotAPort(String),
    #[error("cannot glue port {0} to itself")]
    SamePort(String),
    #[error("degenerate substitution: {0}")]
    DegenerateSubstitution(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("vertex {0} is neither bivalent nor isolated")]
    NotDeletable(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bound too large: {0}")]
    BoundTooLarge(String),
    #[error("missing restriction: {0}")]
    MissingRestriction(String),
    #[error("invalid species: {0}")]
    InvalidSpecies(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
