//! Gromov-Wasserstein learning on graphs.
//!
//! A graph is modelled as a metric-measure object `G(V, C, mu)`: node labels,
//! a sparse adjacency matrix and a probability vector over the nodes. The
//! Gromov-Wasserstein (GW) discrepancy between two such graphs is computed by
//! a proximal-gradient scheme whose inner step is a Sinkhorn projection; the
//! optimal transport it returns encodes node correspondence. On top of the
//! solver the crate builds:
//!
//! * two-graph matching and K-way partitioning (transport against a
//!   self-loop-only "disconnected" graph),
//! * barycenter graphs for several observed graphs, giving multi-graph
//!   matching and jointly aligned multi-graph partitioning,
//! * a recursive K-way decomposition that scales matching to large graphs,
//! * seeded synthetic generators and evaluation metrics for both tasks.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature
//! (default) additionally enables thread-parallel recursion.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod barycenter;
pub mod config;
pub mod dense;
pub mod error;
pub mod graph;
mod math;
pub mod metrics;
pub mod solver;
pub mod sparse;
pub mod synthetic;
pub mod tasks;

pub use config::{Preset, SolverConfig};
pub use dense::DenseMatrix;
pub use error::{GwError, Result};
pub use graph::{DirectedPolicy, Edge, MeasureGraph};
pub use solver::{prox_grad, Coupling, GwResult};
pub use sparse::CsrMatrix;
pub use tasks::{CorrespondenceSet, Partition};
