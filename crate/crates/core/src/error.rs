//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Endpoints of two morphisms do not line up for composition or pairing.
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    /// A construction was asked of a backend that does not support it.
    #[error("capability error: {0}")]
    Capability(String),

    /// A lattice or enumeration would exceed the configured size bound.
    #[error("size guard: {0}")]
    SizeGuard(String),

    /// Malformed input data (tables out of range, non-partitions, bad text forms).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Möbius values and intervals are only defined for comparable pairs.
    #[error("incomparable elements: {0}")]
    Incomparable(String),

    /// A poset handed to the lattice builder has no unique maximum.
    #[error("no top element: {0}")]
    NoTop(String),

    /// An operation required a surjective morphism.
    #[error("not surjective: {0}")]
    NotSurjective(String),

    /// A basis-flavored operation received the wrong flavor.
    #[error("flavor mismatch: expected {expected}, got {got}")]
    FlavorMismatch { expected: String, got: String },

    /// An internal consistency check failed; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
