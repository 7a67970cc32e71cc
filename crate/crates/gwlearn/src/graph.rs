//! The measure-graph data model.
//!
//! A graph is the triple `(labels, C, mu)`: opaque node labels in
//! first-appearance order, a sparse nonnegative adjacency matrix and a
//! strictly positive node probability vector. Node distributions are
//! estimated from degrees as `mu ∝ (n + a)^b`, so `b = 0` gives the uniform
//! distribution and `(a, b) = (0, 1)` the normalized degree.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{GwError, Result};
use crate::math;
use crate::sparse::{Combine, CsrMatrix};

const SIMPLEX_TOL: f64 = 1e-12;

/// One input edge. `weight: None` marks an unweighted edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub src: String,
    pub dst: String,
    pub weight: Option<f64>,
}

impl Edge {
    pub fn new(src: impl Into<String>, dst: impl Into<String>) -> Self {
        Self { src: src.into(), dst: dst.into(), weight: None }
    }

    pub fn weighted(src: impl Into<String>, dst: impl Into<String>, weight: f64) -> Self {
        Self { src: src.into(), dst: dst.into(), weight: Some(weight) }
    }
}

/// What to do with edge direction during construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DirectedPolicy {
    /// `C ← max(C, Cᵀ)`; the default, matching the undirected treatment of
    /// adjacency throughout the solver.
    #[default]
    Symmetrize,
    /// Preserve direction as given.
    Keep,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureGraph {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    adjacency: CsrMatrix,
    mu: Vec<f64>,
    /// `(a, b)` used to estimate `mu`; carried so derived graphs (noisy
    /// copies) can re-estimate consistently.
    dist_params: (f64, f64),
}

impl MeasureGraph {
    /// Build a graph from an edge list.
    ///
    /// Labels are deduplicated and indexed in first-appearance order
    /// (source before target within each edge). If any edge carries a
    /// weight the graph is weighted and duplicate edges accumulate by sum;
    /// otherwise every edge contributes 1 and duplicates collapse (max).
    /// `mu` is estimated from node degrees with shape parameters `(a, b)`.
    pub fn from_edges(edges: &[Edge], policy: DirectedPolicy, a: f64, b: f64) -> Result<Self> {
        if edges.is_empty() {
            return Err(GwError::EmptyEdgeList);
        }
        for e in edges {
            if let Some(w) = e.weight {
                if w < 0.0 || !w.is_finite() {
                    return Err(GwError::NegativeWeight {
                        src: e.src.clone(),
                        dst: e.dst.clone(),
                        weight: w,
                    });
                }
            }
        }
        let weighted = edges.iter().any(|e| e.weight.is_some());

        let mut labels: Vec<String> = Vec::new();
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let intern = |l: &str, labels: &mut Vec<String>, index: &mut BTreeMap<String, usize>| {
            if let Some(&i) = index.get(l) {
                i
            } else {
                let i = labels.len();
                labels.push(l.to_string());
                index.insert(l.to_string(), i);
                i
            }
        };
        let mut trips = Vec::with_capacity(edges.len());
        for e in edges {
            let s = intern(&e.src, &mut labels, &mut index);
            let t = intern(&e.dst, &mut labels, &mut index);
            trips.push((s, t, e.weight.unwrap_or(1.0)));
        }
        let n = labels.len();
        let combine = if weighted { Combine::Sum } else { Combine::Max };
        let mut adjacency = CsrMatrix::from_triplets(n, n, &trips, combine);
        if policy == DirectedPolicy::Symmetrize {
            adjacency = adjacency.max_with_transpose();
        }
        let degrees = adjacency.row_support();
        let mu = node_distribution(&degrees, a, b)?;
        Ok(Self { labels, index, adjacency, mu, dist_params: (a, b) })
    }

    /// Assemble a graph whose node distribution is estimated from its degrees.
    pub fn with_estimated_distribution(
        labels: Vec<String>,
        adjacency: CsrMatrix,
        a: f64,
        b: f64,
    ) -> Result<Self> {
        let degrees = adjacency.row_support();
        let mu = node_distribution(&degrees, a, b)?;
        let mut g = Self::from_parts(labels, adjacency, mu)?;
        g.dist_params = (a, b);
        Ok(g)
    }

    /// Assemble a graph from explicit parts, validating the invariants:
    /// matching dimensions, nonnegative adjacency, strictly positive `mu`
    /// summing to one.
    pub fn from_parts(labels: Vec<String>, adjacency: CsrMatrix, mu: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(GwError::EmptyEdgeList);
        }
        if adjacency.rows() != n || adjacency.cols() != n || mu.len() != n {
            return Err(GwError::DimensionMismatch(alloc::format!(
                "graph parts disagree: {} labels, {}x{} adjacency, {} mu entries",
                n,
                adjacency.rows(),
                adjacency.cols(),
                mu.len()
            )));
        }
        if adjacency.triplets().any(|(_, _, v)| v < 0.0 || !v.is_finite()) {
            return Err(GwError::DimensionMismatch(
                "adjacency entries must be finite and nonnegative".into(),
            ));
        }
        if mu.iter().any(|&m| m <= 0.0 || !m.is_finite()) {
            return Err(GwError::DegenerateDistribution);
        }
        let sum: f64 = mu.iter().sum();
        if math::abs(sum - 1.0) > SIMPLEX_TOL {
            return Err(GwError::DimensionMismatch(alloc::format!(
                "mu sums to {sum}, not 1"
            )));
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GwError::DimensionMismatch(alloc::format!(
                    "duplicate label {l:?}"
                )));
            }
        }
        Ok(Self { labels, index, adjacency, mu, dist_params: (0.0, 1.0) })
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn adjacency(&self) -> &CsrMatrix {
        &self.adjacency
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn dist_params(&self) -> (f64, f64) {
        self.dist_params
    }

    /// Structural degree of every node (number of stored neighbors).
    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.row_support()
    }

    /// Number of undirected edges: unordered pairs `{i, j}` (including
    /// self-loops) with a nonzero entry in either direction.
    pub fn num_undirected_edges(&self) -> usize {
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (r, c, _) in self.adjacency.triplets() {
            seen.insert((r.min(c), r.max(c)));
        }
        seen.len()
    }

    /// Extract the sub-graph induced by `subset`: adjacency restricted to the
    /// subset, `mu` renormalized over it. Node order follows the parent
    /// graph, so extracting the full label set returns the graph unchanged.
    pub fn subgraph(&self, subset: &[String]) -> Result<MeasureGraph> {
        let mut idx = Vec::with_capacity(subset.len());
        for l in subset {
            match self.index_of(l) {
                Some(i) => idx.push(i),
                None => return Err(GwError::UnknownLabel(l.clone())),
            }
        }
        idx.sort_unstable();
        idx.dedup();
        self.subgraph_by_indices(&idx)
    }

    /// Like [`subgraph`](Self::subgraph) but by node index; `indices` must be
    /// strictly increasing.
    pub fn subgraph_by_indices(&self, indices: &[usize]) -> Result<MeasureGraph> {
        if indices.is_empty() {
            return Err(GwError::EmptySubset);
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) || *indices.last().unwrap() >= self.num_nodes()
        {
            return Err(GwError::DimensionMismatch(
                "subgraph indices must be strictly increasing and in range".into(),
            ));
        }
        let labels: Vec<String> = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let adjacency = self.adjacency.select(indices);
        let mass: f64 = indices.iter().map(|&i| self.mu[i]).sum();
        let mu: Vec<f64> = indices.iter().map(|&i| self.mu[i] / mass).collect();
        let mut g = Self::from_parts(labels, adjacency, mu)?;
        g.dist_params = self.dist_params;
        Ok(g)
    }
}

/// Degree-based node distribution `mu = (n + a)^b / ‖(n + a)^b‖₁`.
///
/// `a > 0` is required whenever some node is isolated, otherwise the
/// resulting entry would be zero and the transport solver would divide by it.
pub fn node_distribution(degrees: &[usize], a: f64, b: f64) -> Result<Vec<f64>> {
    if degrees.is_empty() {
        return Err(GwError::EmptyEdgeList);
    }
    if a < 0.0 || b < 0.0 {
        return Err(GwError::InvalidConfig("a and b must be nonnegative".into()));
    }
    if a == 0.0 && degrees.contains(&0) {
        return Err(GwError::DegenerateDistribution);
    }
    let raw: Vec<f64> = degrees.iter().map(|&n| math::powf(n as f64 + a, b)).collect();
    let sum: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|v| v / sum).collect())
}

/// Sorted-interpolation resampling of node distributions.
///
/// Every input vector is sorted in descending order and linearly
/// interpolated at `target_size` equally spaced positions over its index
/// range; the weighted average of the resampled vectors is renormalized to
/// the simplex. The output is descending by construction.
pub fn resample_distribution(
    mus: &[&[f64]],
    omega: &[f64],
    target_size: usize,
) -> Result<Vec<f64>> {
    if target_size == 0 {
        return Err(GwError::InvalidConfig("target_size must be at least 1".into()));
    }
    if mus.is_empty() || mus.len() != omega.len() {
        return Err(GwError::DimensionMismatch(alloc::format!(
            "{} distributions with {} weights",
            mus.len(),
            omega.len()
        )));
    }
    let mut out = alloc::vec![0.0; target_size];
    for (mu, &w) in mus.iter().zip(omega) {
        if mu.is_empty() {
            return Err(GwError::EmptySubset);
        }
        let mut sorted: Vec<f64> = mu.to_vec();
        sorted.sort_unstable_by(|x, y| y.total_cmp(x));
        for (k, slot) in out.iter_mut().enumerate() {
            let pos = if target_size == 1 {
                0.0
            } else {
                k as f64 * (sorted.len() - 1) as f64 / (target_size - 1) as f64
            };
            let lo = math::floor(pos) as usize;
            let hi = (lo + 1).min(sorted.len() - 1);
            let frac = pos - lo as f64;
            *slot += w * (sorted[lo] * (1.0 - frac) + sorted[hi] * frac);
        }
    }
    let sum: f64 = out.iter().sum();
    if sum <= 0.0 {
        return Err(GwError::DegenerateDistribution);
    }
    for v in &mut out {
        *v /= sum;
    }
    Ok(out)
}
