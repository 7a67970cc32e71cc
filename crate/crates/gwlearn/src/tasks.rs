//! Task drivers: matching, partitioning, their multi-graph variants, and the
//! recursive K-way decomposition that scales matching to large graphs.
//!
//! All assignments come from transport argmaxes with ties broken to the
//! lowest index, so every driver is deterministic for a fixed configuration.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::barycenter::learn_barycenter;
use crate::config::SolverConfig;
use crate::error::{GwError, Result};
use crate::graph::{resample_distribution, MeasureGraph};
use crate::solver::{prox_grad, prox_grad_warm};
use crate::sparse::CsrMatrix;

/// A K-way node clustering of one graph.
///
/// `subgraphs` is indexed by cluster; empty clusters are recorded as `None`
/// so cluster indices stay aligned across graphs partitioned against a
/// shared barycenter.
#[derive(Debug, Clone)]
pub struct Partition {
    num_clusters: usize,
    assignment: BTreeMap<String, usize>,
    subgraphs: Vec<Option<MeasureGraph>>,
}

impl Partition {
    /// Build from a per-node cluster assignment (indexed like the graph's
    /// nodes); extracts one sub-graph per nonempty cluster.
    pub fn from_index_assignment(
        graph: &MeasureGraph,
        assignment: &[usize],
        num_clusters: usize,
    ) -> Result<Self> {
        if assignment.len() != graph.num_nodes() {
            return Err(GwError::DimensionMismatch(format!(
                "{} assignments for {} nodes",
                assignment.len(),
                graph.num_nodes()
            )));
        }
        if let Some(&c) = assignment.iter().find(|&&c| c >= num_clusters) {
            return Err(GwError::DimensionMismatch(format!(
                "cluster index {c} out of range for {num_clusters} clusters"
            )));
        }
        let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); num_clusters];
        for (node, &c) in assignment.iter().enumerate() {
            members[c].push(node);
        }
        let mut subgraphs = Vec::with_capacity(num_clusters);
        for m in &members {
            if m.is_empty() {
                subgraphs.push(None);
            } else {
                subgraphs.push(Some(graph.subgraph_by_indices(m)?));
            }
        }
        let map = assignment
            .iter()
            .enumerate()
            .map(|(i, &c)| (graph.label(i).into(), c))
            .collect();
        Ok(Self { num_clusters, assignment: map, subgraphs })
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn cluster_of(&self, label: &str) -> Option<usize> {
        self.assignment.get(label).copied()
    }

    /// Node label → cluster index.
    pub fn assignment(&self) -> &BTreeMap<String, usize> {
        &self.assignment
    }

    /// Per-cluster sub-graphs; `None` marks an empty cluster.
    pub fn subgraphs(&self) -> &[Option<MeasureGraph>] {
        &self.subgraphs
    }

    pub fn nonempty_subgraphs(&self) -> impl Iterator<Item = &MeasureGraph> {
        self.subgraphs.iter().flatten()
    }
}

/// Matched node tuples: pairs for two-graph matching, M-tuples for
/// multi-graph matching. Task drivers produce uniform arity; unions built
/// by the recursive decomposition may mix arities when branches degenerate.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorrespondenceSet {
    tuples: Vec<Vec<String>>,
}

impl CorrespondenceSet {
    /// Validating constructor: tuples must share one arity of at least 2.
    pub fn from_tuples(tuples: Vec<Vec<String>>) -> Result<Self> {
        if let Some(first) = tuples.first() {
            if first.len() < 2 || tuples.iter().any(|t| t.len() != first.len()) {
                return Err(GwError::MixedArity);
            }
        }
        Ok(Self { tuples })
    }

    pub(crate) fn from_tuples_unchecked(tuples: Vec<Vec<String>>) -> Self {
        Self { tuples }
    }

    pub fn tuples(&self) -> &[Vec<String>] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// The common tuple arity, or `None` when empty or mixed.
    pub fn arity(&self) -> Option<usize> {
        let first = self.tuples.first()?.len();
        self.tuples.iter().all(|t| t.len() == first).then_some(first)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<String>> {
        self.tuples.iter()
    }

    fn extend(&mut self, other: CorrespondenceSet) {
        self.tuples.extend(other.tuples);
    }
}

/// Two-graph matching: solve the transport and pair every source node with
/// its row-argmax target node.
pub fn match_two(
    gs: &MeasureGraph,
    gt: &MeasureGraph,
    cfg: &SolverConfig,
) -> Result<CorrespondenceSet> {
    let res = prox_grad(gs, gt, cfg)?;
    let t = &res.coupling.matrix;
    let tuples = (0..gs.num_nodes())
        .map(|i| {
            let j = t.argmax_in_row(i);
            alloc::vec![gs.label(i).into(), gt.label(j).into()]
        })
        .collect();
    Ok(CorrespondenceSet { tuples })
}

/// K-way partitioning of a single graph: transport against the self-loop-only
/// disconnected graph whose distribution resamples the graph's own, then
/// cluster each node by its row-argmax.
pub fn partition_one(g: &MeasureGraph, cfg: &SolverConfig, k: usize) -> Result<Partition> {
    if k == 0 {
        return Err(GwError::InvalidConfig("cluster count must be at least 1".into()));
    }
    if k > g.num_nodes() {
        return Err(GwError::ClusterCountTooLarge { k, nodes: g.num_nodes() });
    }
    let mu_dc = resample_distribution(&[g.mu()], &[1.0], k)?;
    let labels = (0..k).map(|i| alloc::string::ToString::to_string(&i)).collect();
    let g_dc = MeasureGraph::from_parts(labels, CsrMatrix::from_diag(&mu_dc), mu_dc.clone())?;
    let init = crate::solver::jittered_product(g.mu(), g_dc.mu(), cfg.seed);
    let res = prox_grad_warm(g, &g_dc, cfg, Some(init))?;
    let assignment: Vec<usize> =
        (0..g.num_nodes()).map(|i| res.coupling.matrix.argmax_in_row(i)).collect();
    Partition::from_index_assignment(g, &assignment, k)
}

/// Multi-graph matching through a learned barycenter of size
/// `min_m |V_m|`: for each barycenter node, collect the column-argmax node
/// of every graph into one tuple.
pub fn multi_match(graphs: &[MeasureGraph], cfg: &SolverConfig) -> Result<CorrespondenceSet> {
    if graphs.len() < 2 {
        return Err(GwError::InvalidConfig("multi-graph matching needs at least 2 graphs".into()));
    }
    let k = graphs.iter().map(|g| g.num_nodes()).min().unwrap();
    let bary = learn_barycenter(graphs, cfg, k)?;
    let tuples = (0..k)
        .map(|col| {
            graphs
                .iter()
                .zip(&bary.transports)
                .map(|(g, t)| g.label(t.matrix.argmax_in_col(col)).into())
                .collect()
        })
        .collect();
    Ok(CorrespondenceSet { tuples })
}

/// Jointly partition several graphs against one learned barycenter of size
/// `k`. Cluster indices are aligned: cluster `k` of every output partition
/// corresponds to barycenter node `k`.
pub fn multi_partition(
    graphs: &[MeasureGraph],
    cfg: &SolverConfig,
    k: usize,
) -> Result<Vec<Partition>> {
    if graphs.is_empty() {
        return Err(GwError::InvalidConfig("multi-graph partitioning needs graphs".into()));
    }
    if k == 0 {
        return Err(GwError::InvalidConfig("cluster count must be at least 1".into()));
    }
    let bary = learn_barycenter(graphs, cfg, k)?;
    graphs
        .iter()
        .zip(&bary.transports)
        .map(|(g, t)| {
            let assignment: Vec<usize> =
                (0..g.num_nodes()).map(|i| t.matrix.argmax_in_row(i)).collect();
            Partition::from_index_assignment(g, &assignment, k)
        })
        .collect()
}

/// Where a leaf's nodes came from and whether it was matched.
#[derive(Debug, Clone)]
pub struct LeafRecord {
    /// Cluster indices from the root to this leaf.
    pub path: Vec<usize>,
    /// Node labels per input graph (empty when the graph's branch is empty).
    pub node_sets: Vec<Vec<String>>,
    /// Tuples emitted for this leaf.
    pub matched: usize,
}

/// Diagnostics of one recursive run.
#[derive(Debug, Clone, Default)]
pub struct SgwlTrace {
    pub leaves: Vec<LeafRecord>,
    pub warnings: Vec<String>,
}

struct Branch {
    path: Vec<usize>,
    /// One slot per input graph; `None` when this branch holds no nodes of it.
    graphs: Vec<Option<MeasureGraph>>,
}

/// Recursion stops early once the largest member of a branch is this small.
fn leaf_threshold(k: usize) -> usize {
    (2 * k).max(16)
}

/// Recursive K-way matching: `cfg.r` levels of aligned multi-graph
/// partitioning with fan-out `cfg.k`, then direct matching within each leaf.
pub fn s_gwl(graphs: &[MeasureGraph], cfg: &SolverConfig) -> Result<CorrespondenceSet> {
    s_gwl_detailed(graphs, cfg).map(|(s, _)| s)
}

/// [`s_gwl`] with per-leaf diagnostics.
pub fn s_gwl_detailed(
    graphs: &[MeasureGraph],
    cfg: &SolverConfig,
) -> Result<(CorrespondenceSet, SgwlTrace)> {
    s_gwl_with_threads(graphs, cfg, 1)
}

/// [`s_gwl_detailed`] with branch-level parallelism. Branches at the same
/// recursion level run concurrently on up to `threads` workers; results are
/// assembled in branch-path order, so output is independent of the thread
/// count.
pub fn s_gwl_with_threads(
    graphs: &[MeasureGraph],
    cfg: &SolverConfig,
    threads: usize,
) -> Result<(CorrespondenceSet, SgwlTrace)> {
    cfg.validate()?;
    if graphs.len() < 2 {
        return Err(GwError::InvalidConfig("recursive matching needs at least 2 graphs".into()));
    }
    let m = graphs.len();
    let threshold = leaf_threshold(cfg.k);

    let mut active = alloc::vec![Branch {
        path: Vec::new(),
        graphs: graphs.iter().cloned().map(Some).collect(),
    }];
    let mut leaves: Vec<Branch> = Vec::new();

    for level in 1..=cfg.r {
        let mut splittable = Vec::new();
        for branch in active.drain(..) {
            let present = branch.graphs.iter().flatten().count();
            let largest =
                branch.graphs.iter().flatten().map(|g| g.num_nodes()).max().unwrap_or(0);
            if present < 2 || largest <= threshold {
                leaves.push(branch);
            } else {
                splittable.push(branch);
            }
        }

        let results = run_indexed(splittable.len(), threads, |idx| {
            let branch = &splittable[idx];
            let members: Vec<MeasureGraph> =
                branch.graphs.iter().flatten().cloned().collect();
            multi_partition(&members, cfg, cfg.k).map_err(|e| GwError::Recursion {
                level,
                path: branch.path.clone(),
                source: alloc::boxed::Box::new(e),
            })
        });

        for (branch, parts) in splittable.into_iter().zip(results) {
            let parts = parts?;
            for k_idx in 0..cfg.k {
                let mut child = Vec::with_capacity(m);
                let mut part_iter = parts.iter();
                for slot in &branch.graphs {
                    match slot {
                        Some(_) => {
                            let part = part_iter.next().expect("one partition per member");
                            child.push(part.subgraphs()[k_idx].clone());
                        }
                        None => child.push(None),
                    }
                }
                let mut path = branch.path.clone();
                path.push(k_idx);
                active.push(Branch { path, graphs: child });
            }
        }
    }
    leaves.extend(active);
    leaves.sort_by(|a, b| a.path.cmp(&b.path));

    let matched = run_indexed(leaves.len(), threads, |idx| {
        let leaf = &leaves[idx];
        let members: Vec<&MeasureGraph> = leaf.graphs.iter().flatten().collect();
        if members.len() < 2 {
            return Ok(CorrespondenceSet::default());
        }
        if m == 2 {
            match_two(members[0], members[1], cfg)
        } else {
            let owned: Vec<MeasureGraph> = members.into_iter().cloned().collect();
            multi_match(&owned, cfg)
        }
        .map_err(|e| GwError::Recursion {
            level: leaf.path.len(),
            path: leaf.path.clone(),
            source: alloc::boxed::Box::new(e),
        })
    });

    let mut out = CorrespondenceSet::default();
    let mut trace = SgwlTrace::default();
    for (leaf, tuples) in leaves.into_iter().zip(matched) {
        let tuples = tuples?;
        let node_sets: Vec<Vec<String>> = leaf
            .graphs
            .iter()
            .map(|g| g.as_ref().map(|g| g.labels().to_vec()).unwrap_or_default())
            .collect();
        let sizes: Vec<usize> = node_sets.iter().map(|s| s.len()).filter(|&s| s > 0).collect();
        if let (Some(&max), Some(&min)) = (sizes.iter().max(), sizes.iter().min()) {
            if min > 0 && max >= 4 * min && max > threshold {
                trace.warnings.push(format!(
                    "leaf {:?} has grossly unequal member sizes {sizes:?}",
                    leaf.path
                ));
            }
        }
        if node_sets.iter().filter(|s| !s.is_empty()).count() == 1 {
            trace.warnings.push(format!(
                "leaf {:?} has a single nonempty member; its nodes are left unmatched",
                leaf.path
            ));
        }
        trace.leaves.push(LeafRecord { path: leaf.path, node_sets, matched: tuples.len() });
        out.extend(tuples);
    }
    Ok((out, trace))
}

/// Run `f(0..count)` and collect the results in index order, on up to
/// `threads` workers when the `std` feature is enabled.
fn run_indexed<T, F>(count: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    #[cfg(feature = "std")]
    if threads > 1 && count > 1 {
        use std::sync::atomic::{AtomicUsize, Ordering};
        use std::sync::Mutex;
        let next = AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<T>>> = (0..count).map(|_| Mutex::new(None)).collect();
        std::thread::scope(|scope| {
            for _ in 0..threads.min(count) {
                scope.spawn(|| loop {
                    let idx = next.fetch_add(1, Ordering::Relaxed);
                    if idx >= count {
                        break;
                    }
                    let value = f(idx);
                    *slots[idx].lock().unwrap() = Some(value);
                });
            }
        });
        return slots
            .into_iter()
            .map(|s| s.into_inner().unwrap().expect("worker filled every slot"))
            .collect();
    }
    #[cfg(not(feature = "std"))]
    let _ = threads;
    (0..count).map(f).collect()
}
