//! Exact linear algebra over the two-element field.
//!
//! Vectors and matrices are bit-packed into 64-bit words; the canonical
//! interchange form is the sparse row-support listing (sorted, strictly
//! increasing column indices per row). All operations here are deterministic:
//! randomized search takes an explicit seed through [`SearchBudget`] and the
//! same inputs always produce the same outputs, including tie-breaks.
//!
//! # Operations
//!
//! * rank, reduced echelon form, nullspace basis ([`BitMatrix`]);
//! * minimum-weight coset search ([`min_coset_weight`]): the lightest vector
//!   in the span of one basis but outside the span of a second, with an
//!   explicit flag distinguishing exact answers from heuristic upper bounds;
//! * parsing of classic alist-format check matrices ([`parse_alist`]).
//!
//! # Exactness
//!
//! Exact search runs in one of two modes, both deterministic: full Gray-code
//! enumeration of the coset representatives times the excluded subspace when
//! the combined dimension is small, and an increasing-information-weight
//! search with a matching lower-bound certificate otherwise. When the quotient
//! dimension exceeds the budget the result degrades to a flagged heuristic
//! upper bound found by randomized information sets.

mod alist;
mod bitmatrix;
mod bitvec;
mod coset;
mod solve;

pub use alist::parse_alist;
pub use bitmatrix::BitMatrix;
pub use bitvec::BitVec;
pub use coset::{min_coset_weight, CosetSearch, SearchBudget};
pub use solve::Rref;

use serde::{Deserialize, Serialize};

/// A weight that may be infinite (empty search space: the quotient is trivial).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Weight {
    Finite(u64),
    Infinite,
}

impl Weight {
    /// Finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            Weight::Finite(w) => Some(w),
            Weight::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Weight::Finite(_))
    }

    pub fn min(self, other: Weight) -> Weight {
        match (self, other) {
            (Weight::Finite(a), Weight::Finite(b)) => Weight::Finite(a.min(b)),
            (Weight::Finite(a), Weight::Infinite) => Weight::Finite(a),
            (Weight::Infinite, b) => b,
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.finite().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match Option::<u64>::deserialize(d)? {
            Some(w) => Weight::Finite(w),
            None => Weight::Infinite,
        })
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{w}"),
            Weight::Infinite => write!(f, "inf"),
        }
    }
}

/// Errors raised by field-level operations.
#[derive(Debug, thiserror::Error)]
pub enum F2Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("row {row}: support must be sorted, strictly increasing, in range ({detail})")]
    InvalidSupport { row: usize, detail: String },
    #[error("subspace basis is not contained in the search space")]
    ImageNotContained,
    #[error("alist parse error: {0}")]
    AlistParse(String),
}
