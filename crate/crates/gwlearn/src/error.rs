//! Error type shared across the crate.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, GwError>;

/// Everything that can go wrong while building graphs, solving transports
/// or evaluating results.
#[derive(Debug, Clone, PartialEq)]
pub enum GwError {
    /// Graph construction was given no edges.
    EmptyEdgeList,
    /// An edge carried a negative weight.
    NegativeWeight { src: String, dst: String, weight: f64 },
    /// Node-distribution estimation hit an isolated node with `a = 0`.
    DegenerateDistribution,
    /// Sub-graph extraction was given an empty node subset.
    EmptySubset,
    /// A label does not exist in the graph it was used against.
    UnknownLabel(String),
    /// Shapes of the supplied operands do not line up.
    DimensionMismatch(String),
    /// A solver configuration violates its invariants.
    InvalidConfig(String),
    /// The scaling kernel underflowed to an all-zero row or column; the
    /// proximal weight is too small for the cost scale of the inputs.
    GammaTooSmall { iteration: usize },
    /// More clusters requested than the graph has nodes.
    ClusterCountTooLarge { k: usize, nodes: usize },
    /// A generator specification is infeasible.
    InvalidGeneratorSpec(String),
    /// A metric was asked to evaluate an empty correspondence set.
    EmptyCorrespondence,
    /// Correspondence tuples of different arity were mixed.
    MixedArity,
    /// A mapping does not cover some source node.
    UncoveredSourceNode(String),
    /// Two partitions do not cover the same node set.
    NodeSetMismatch,
    /// Failure while solving the transport for one of the observed graphs.
    Barycenter { graph_index: usize, source: Box<GwError> },
    /// Failure inside the recursive decomposition; `path` is the sequence of
    /// cluster indices leading to the failing branch.
    Recursion { level: usize, path: Vec<usize>, source: Box<GwError> },
}

impl fmt::Display for GwError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GwError::EmptyEdgeList => write!(f, "edge list is empty"),
            GwError::NegativeWeight { src, dst, weight } => {
                write!(f, "edge {src} -> {dst} has negative weight {weight}")
            }
            GwError::DegenerateDistribution => write!(
                f,
                "degenerate distribution: isolated node with a = 0 (set a > 0)"
            ),
            GwError::EmptySubset => write!(f, "node subset is empty"),
            GwError::UnknownLabel(l) => write!(f, "unknown node label {l:?}"),
            GwError::DimensionMismatch(what) => write!(f, "dimension mismatch: {what}"),
            GwError::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            GwError::GammaTooSmall { iteration } => write!(
                f,
                "gamma too small: scaling kernel underflowed to zero at outer iteration {iteration}"
            ),
            GwError::ClusterCountTooLarge { k, nodes } => {
                write!(f, "requested {k} clusters for a graph with {nodes} nodes")
            }
            GwError::InvalidGeneratorSpec(what) => write!(f, "invalid generator spec: {what}"),
            GwError::EmptyCorrespondence => write!(f, "correspondence set is empty"),
            GwError::MixedArity => write!(f, "correspondence tuples have mixed arity"),
            GwError::UncoveredSourceNode(l) => {
                write!(f, "mapping does not cover source node {l:?}")
            }
            GwError::NodeSetMismatch => write!(f, "partitions cover different node sets"),
            GwError::Barycenter { graph_index, source } => {
                write!(f, "barycenter update failed for graph {graph_index}: {source}")
            }
            GwError::Recursion { level, path, source } => {
                write!(f, "recursion level {level}, branch path ")?;
                if path.is_empty() {
                    write!(f, "(root)")?;
                } else {
                    for (i, k) in path.iter().enumerate() {
                        if i > 0 {
                            write!(f, "/")?;
                        }
                        write!(f, "{k}")?;
                    }
                }
                write!(f, ": {source}")
            }
        }
    }
}

impl core::error::Error for GwError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            GwError::Barycenter { source, .. } | GwError::Recursion { source, .. } => {
                Some(source.as_ref())
            }
            _ => None,
        }
    }
}
