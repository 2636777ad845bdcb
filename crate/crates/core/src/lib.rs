//! Survival probability of the Grover walk on finite graphs with sinks.
//!
//! The long-time survival probability equals the squared norm of the initial state projected
//! onto the attractor (centered) eigenspace of the truncated evolution `E`. This crate builds
//! that eigenspace combinatorially, from fundamental cycles, signed walks between odd cycles
//! and self-loops, and interior-supported eigenvectors of the Dirichlet-cut random walk, and
//! checks every construction against direct simulation and a numeric eigendecomposition.

pub mod attractor;
pub mod cycles;
pub mod dynamics;
pub mod error;
pub mod format;
pub mod graph;
pub mod linalg;
pub mod operators;
pub mod oracle;
pub mod random;
pub mod report;
pub mod verify;

pub use cycles::{classify_case, fundamental_cycle_basis, CaseLabel, CycleBasis, FundamentalCycle, Parity};
pub use error::{Error, Result};
pub use format::GraphSpec;
pub use graph::{ArcId, InternalGraph, SymmetricDigraph, VertexId};
