//! Toolkit for building quantum CSS codes out of chain complexes and
//! certifying how local they can be made.
//!
//! The pipeline runs in five layers, each usable on its own:
//!
//! * [`f2`] — exact linear algebra over the two-element field, including
//!   minimum-weight coset search with explicit exactness flags.
//! * [`code`] — CSS codes as three-term chain complexes, with generators
//!   (toric, hypergraph product) and full reports (size, dimension, distances).
//! * [`complex`] — cell complexes, subdivisions, systoles, and the dual
//!   structure on closed manifolds.
//! * [`nerve`] — good covers, partitions of unity, and nerve maps.
//! * [`embed`] / [`locality`] — randomized coarse embeddings into Euclidean
//!   space with exhaustive certificates, and qubit placements into lattice
//!   cubes with locality certificates.
//! * [`bounds`] — distance and dimension-distance tradeoff checks plus the
//!   frontier survey used for sweeps.
//!
//! Every randomized operation takes an explicit seed and documents its stream
//! usage; identical inputs give byte-identical outputs.

pub mod bounds;
pub mod code;
pub mod complex;
pub mod embed;
pub mod f2;
pub mod geometry;
pub mod graph;
pub mod io;
pub mod locality;
pub mod nerve;

/// Version stamped into every serialized artifact.
pub const FORMAT_VERSION: &str = env!("CARGO_PKG_VERSION");
