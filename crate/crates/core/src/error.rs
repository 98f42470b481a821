use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two values live in incompatible number fields.
    #[error("mixed field contexts: {0}")]
    MixedContext(String),

    /// Division by an exact zero.
    #[error("division by zero")]
    DivisionByZero,

    /// Interval refinement could not separate the root; the field context
    /// invariant (monic irreducible polynomial with an isolating interval)
    /// does not hold.
    #[error("non-real or corrupted field state: {0}")]
    NonRealState(String),

    /// An exact operation was requested on a float-tier value.
    #[error("inexact state: {0}")]
    InexactState(String),

    /// A float-tier floor could not be certified: the tracked error
    /// interval straddles an integer.
    #[error("float floor is precision-ambiguous near {0}")]
    AmbiguousFloat(f64),

    /// A basis-change matrix is not in GL_n(Z).
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),

    /// A basis change left the positive representative cone.
    #[error("basis change leaves the positive cone at coordinate {0}")]
    LeftCone(usize),

    /// Two objects of different rank were combined.
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    /// A decisive verdict was requested on float-tier input.
    #[error("inexact input: {0}")]
    InexactInput(String),

    /// A textual value did not match the exact-real grammar.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
