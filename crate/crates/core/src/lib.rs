//! Maximal K_{r+1}-free graphs near the Turán threshold.
//!
//! The crate builds the extremal saturated families (the recursive removal
//! graphs `G_{r,s}`, the final graphs `H_{r,s,t}(n)` and the randomized
//! three-stage construction), runs the constructive stability decomposition
//! that deletes few vertices to reach a complete r-partite graph, and checks
//! everything against exhaustive oracles on small instances.

pub mod bitset;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod formats;
pub mod graph;
pub mod harness;
pub mod oracles;
pub mod random_build;
pub mod stability;
pub mod turan;

pub use bitset::VertexSet;
pub use error::{Error, ParseError, Result};
pub use graph::{CliqueMatching, Graph, PartitionedGraph};

/// Exact scalar used by every threshold predicate.
pub type Exact = num_rational::BigRational;
/// Floating scalar used for reported ratios and Monte-Carlo estimates.
pub type Real = f64;
