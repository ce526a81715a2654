//! Restricted representations of the non-graded Hamiltonian Lie algebra
//! H(2;(1,1);Φ(1)) and its p-envelope over prime fields of characteristic
//! p ≥ 5.

pub mod cartan;
pub mod cli;
pub mod dividedpowers;
pub mod induction;
pub mod primefield;
pub mod repstructure;
pub mod wittrestrict;

/// Errors raised by the algebra and module constructions.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime at least 5")]
    InvalidPrime(u32),
    #[error("element not in span: {0}")]
    NotInSpan(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// The guide from `book/`, compiled here so its examples run as doc-tests.
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    pub mod fields {}
    #[doc = include_str!("../../../book/src/algebra.md")]
    pub mod algebra {}
    #[doc = include_str!("../../../book/src/induced.md")]
    pub mod induced {}
    #[doc = include_str!("../../../book/src/series.md")]
    pub mod series {}
    #[doc = include_str!("../../../book/src/witt.md")]
    pub mod witt {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
