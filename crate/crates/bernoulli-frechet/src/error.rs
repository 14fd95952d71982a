//! Error type shared by every module in this crate.
//!
//! The variants split into three broad groups that callers (notably the CLI)
//! treat differently:
//!
//! * input/validation failures (`InvalidClass`, `NegativeMass`, `Parse`, ...)
//!   mean the caller handed us something outside a documented precondition;
//! * `Unsupported` means the request is well formed but sits behind a
//!   dimension guard (e.g. dense 2^d work at large d) that the caller did not
//!   override;
//! * `Internal` means a cross-check that should hold by construction failed,
//!   i.e. a bug in this crate rather than in the input.

use num::BigUint;
use thiserror::Error;

use crate::rat::Rat;

#[derive(Debug, Error)]
pub enum Error {
    /// Class parameters violate a construction requirement (coprimality,
    /// margin range, dimension floor).
    #[error("invalid class: {0}")]
    InvalidClass(String),

    /// A dense pmf was supplied with the wrong number of entries.
    #[error("pmf has {got} entries, expected 2^d = {want}")]
    PmfLength { got: usize, want: BigUint },

    /// A support point index or bit string does not describe a point of
    /// {0,1}^d for the class at hand.
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// First negative entry found while validating a pmf.
    #[error("negative mass {value} at point {point}")]
    NegativeMass { point: String, value: Rat },

    /// Pmf entries do not add up to one.
    #[error("total mass is {sum}, expected 1")]
    MassSumNotOne { sum: Rat },

    /// A univariate margin disagrees with the class probability. `index` is
    /// the 1-based coordinate of the offending margin.
    #[error("margin {index} is {got}, expected {want}")]
    MarginMismatch { index: u32, got: Rat, want: Rat },

    /// A vector or polynomial has the wrong number of variables for the
    /// class it is used with.
    #[error("dimension mismatch: got {got}, expected {want}")]
    DimensionMismatch { got: u32, want: u32 },

    /// The polynomial does not vanish on all the points it must vanish on,
    /// so it has no preimage among the joint distributions of the class.
    #[error("polynomial is not in the ideal: {0}")]
    NotInIdeal(String),

    /// The zero polynomial is the image of every kernel member and has no
    /// canonical preimage.
    #[error("the zero polynomial has no canonical preimage; its fiber is the whole kernel")]
    ZeroPolynomial,

    /// An index set for a fundamental polynomial or a search specification
    /// is malformed (out of range, duplicated, too small, ...).
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    /// A search specification violates one of its structural constraints.
    #[error("invalid search spec: {0}")]
    InvalidSearchSpec(String),

    /// Text input (rational, polynomial, pmf file) failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// The operation is gated behind a dimension or size guard.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An internal consistency check failed. This is a bug, not bad input.
    #[error("internal consistency violation: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
