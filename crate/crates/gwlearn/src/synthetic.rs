//! Seeded synthetic benchmarks: Gaussian random partition graphs,
//! Barabási-Albert graphs, and the noisy-copy protocol for matching.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{GwError, Result};
use crate::graph::MeasureGraph;
use crate::math;
use crate::sparse::{Combine, CsrMatrix};
use crate::tasks::{CorrespondenceSet, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Planted clusters with dense intra- and sparse inter-cluster edges.
    GaussianPartition,
    /// Preferential attachment; no planted structure.
    BarabasiAlbert,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Intra-cluster edge probability (Gaussian partition).
    pub p_in: f64,
    /// Inter-cluster edge probability (Gaussian partition).
    pub p_out: f64,
    /// Normal parameters for the cluster sizes (Gaussian partition).
    pub cluster_mean: f64,
    pub cluster_std: f64,
    /// Edges added per node (Barabási-Albert).
    pub m_attach: usize,
    pub seed: u64,
    /// Shape of the estimated node distribution of the generated graph.
    pub dist_a: f64,
    pub dist_b: f64,
}

impl GeneratorSpec {
    pub fn gaussian(n: usize, p_in: f64, p_out: f64, seed: u64) -> Self {
        Self {
            kind: GeneratorKind::GaussianPartition,
            n,
            p_in,
            p_out,
            cluster_mean: 200.0,
            cluster_std: 10.0,
            m_attach: 0,
            seed,
            dist_a: 0.0,
            dist_b: 1.0,
        }
    }

    pub fn barabasi_albert(n: usize, m_attach: usize, seed: u64) -> Self {
        Self {
            kind: GeneratorKind::BarabasiAlbert,
            n,
            p_in: 0.0,
            p_out: 0.0,
            cluster_mean: 0.0,
            cluster_std: 0.0,
            m_attach,
            seed,
            dist_a: 0.0,
            dist_b: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        fn bad(msg: impl Into<String>) -> Result<()> {
            Err(GwError::InvalidGeneratorSpec(msg.into()))
        }
        if self.n == 0 {
            return bad("graph must have at least one node");
        }
        match self.kind {
            GeneratorKind::GaussianPartition => {
                if !(0.0..=1.0).contains(&self.p_in) || !(0.0..=1.0).contains(&self.p_out) {
                    return bad("edge probabilities must lie in [0, 1]");
                }
                if self.p_out > self.p_in {
                    return bad("p_out must not exceed p_in");
                }
                if self.cluster_mean.is_nan() || self.cluster_mean < 1.0 {
                    return bad("cluster_mean must be at least 1");
                }
                if self.cluster_mean > self.n as f64 {
                    return bad(format!(
                        "cluster_mean {} exceeds the node count {}",
                        self.cluster_mean, self.n
                    ));
                }
                if self.cluster_std < 0.0 {
                    return bad("cluster_std must be nonnegative");
                }
            }
            GeneratorKind::BarabasiAlbert => {
                if self.m_attach == 0 || self.m_attach >= self.n {
                    return bad("m_attach must satisfy 1 <= m < n");
                }
            }
        }
        Ok(())
    }
}

/// Generate a graph. Gaussian partition graphs carry their planted clusters
/// as ground truth; Barabási-Albert graphs carry none. Output is a pure
/// function of the spec.
pub fn generate(spec: &GeneratorSpec) -> Result<(MeasureGraph, Option<Partition>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        GeneratorKind::GaussianPartition => {
            let sizes = sample_cluster_sizes(spec, &mut rng);
            let mut cluster_of = Vec::with_capacity(spec.n);
            for (c, &s) in sizes.iter().enumerate() {
                cluster_of.extend(core::iter::repeat_n(c, s));
            }
            let mut trips = Vec::new();
            for i in 0..spec.n {
                for j in (i + 1)..spec.n {
                    let p = if cluster_of[i] == cluster_of[j] { spec.p_in } else { spec.p_out };
                    if rng.gen::<f64>() < p {
                        trips.push((i, j, 1.0));
                        trips.push((j, i, 1.0));
                    }
                }
            }
            let adjacency = CsrMatrix::from_triplets(spec.n, spec.n, &trips, Combine::Max);
            let labels = (0..spec.n).map(|i| i.to_string()).collect();
            let graph = MeasureGraph::with_estimated_distribution(
                labels,
                adjacency,
                spec.dist_a,
                spec.dist_b,
            )?;
            let truth = Partition::from_index_assignment(&graph, &cluster_of, sizes.len())?;
            Ok((graph, Some(truth)))
        }
        GeneratorKind::BarabasiAlbert => {
            let m = spec.m_attach;
            let mut trips = Vec::new();
            let mut targets: Vec<usize> = (0..m).collect();
            let mut repeated: Vec<usize> = Vec::new();
            for src in m..spec.n {
                for &t in &targets {
                    trips.push((src, t, 1.0));
                    trips.push((t, src, 1.0));
                }
                repeated.extend(&targets);
                repeated.extend(core::iter::repeat_n(src, m));
                let mut picked = BTreeSet::new();
                while picked.len() < m {
                    picked.insert(repeated[rng.gen_range(0..repeated.len())]);
                }
                targets = picked.into_iter().collect();
            }
            let adjacency = CsrMatrix::from_triplets(spec.n, spec.n, &trips, Combine::Max);
            let labels = (0..spec.n).map(|i| i.to_string()).collect();
            let graph = MeasureGraph::with_estimated_distribution(
                labels,
                adjacency,
                spec.dist_a,
                spec.dist_b,
            )?;
            Ok((graph, None))
        }
    }
}

/// Draw cluster sizes from `N(mean, std)` (rounded, clamped to 1) until the
/// node budget is filled; the last cluster absorbs the remainder.
fn sample_cluster_sizes(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let normal = Normal::new(spec.cluster_mean, spec.cluster_std.max(f64::MIN_POSITIVE))
        .expect("validated parameters");
    let mut sizes = Vec::new();
    let mut total = 0usize;
    while total < spec.n {
        let draw = math::round(normal.sample(rng)).max(1.0) as usize;
        if total + draw >= spec.n {
            sizes.push(spec.n - total);
            break;
        }
        sizes.push(draw);
        total += draw;
    }
    sizes
}

/// Produce a noisy copy of `g` for the matching protocol: `⌈|V|·q/100⌉`
/// fresh nodes and `⌈|E|·q/100⌉` fresh edges, every fresh node receiving at
/// least one of the fresh edges. Labels are preserved (ground truth is the
/// identity pairing on the original nodes) but the node order of the copy is
/// shuffled so serialization leaks no positional information.
pub fn add_noise(g: &MeasureGraph, q: f64, seed: u64) -> Result<(MeasureGraph, CorrespondenceSet)> {
    if q < 0.0 || !q.is_finite() {
        return Err(GwError::InvalidGeneratorSpec("noise percentage must be nonnegative".into()));
    }
    let truth = CorrespondenceSet::from_tuples_unchecked(
        g.labels().iter().map(|l| alloc::vec![l.clone(), l.clone()]).collect(),
    );
    let v = g.num_nodes();
    let e = g.num_undirected_edges();
    let new_nodes = math::ceil(v as f64 * q / 100.0) as usize;
    let new_edges = math::ceil(e as f64 * q / 100.0) as usize;
    if new_nodes == 0 && new_edges == 0 {
        return Ok((g.clone(), truth));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = v + new_nodes;
    let mut present: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (r, c, _) in g.adjacency().triplets() {
        present.insert((r.min(c), r.max(c)));
    }

    let mut injected: Vec<(usize, usize)> = Vec::with_capacity(new_edges);
    let place = |fixed: Option<usize>,
                     rng: &mut ChaCha8Rng,
                     present: &mut BTreeSet<(usize, usize)>|
     -> Option<(usize, usize)> {
        for _ in 0..10 * total {
            let u = fixed.unwrap_or_else(|| rng.gen_range(0..total));
            let w = rng.gen_range(0..total);
            if u == w {
                continue;
            }
            let key = (u.min(w), u.max(w));
            if present.insert(key) {
                return Some(key);
            }
        }
        // dense fallback: first free partner in scan order
        let u = fixed.unwrap_or(0);
        (0..total).find_map(|w| {
            if w == u {
                return None;
            }
            let key = (u.min(w), u.max(w));
            present.insert(key).then_some(key)
        })
    };
    // every fresh node gets one of the fresh edges first
    for i in 0..new_nodes.min(new_edges) {
        if let Some(edge) = place(Some(v + i), &mut rng, &mut present) {
            injected.push(edge);
        }
    }
    while injected.len() < new_edges {
        match place(None, &mut rng, &mut present) {
            Some(edge) => injected.push(edge),
            None => break, // graph is complete
        }
    }

    let mut labels: Vec<String> = g.labels().to_vec();
    let mut taken: BTreeSet<String> = g.labels().iter().cloned().collect();
    let mut next = 0usize;
    for _ in 0..new_nodes {
        let fresh = loop {
            let cand = format!("noise{next}");
            next += 1;
            if !taken.contains(&cand) {
                break cand;
            }
        };
        taken.insert(fresh.clone());
        labels.push(fresh);
    }

    // shuffled serialization order
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(&mut rng);
    let mut new_index = alloc::vec![0usize; total];
    for (slot, &old) in order.iter().enumerate() {
        new_index[old] = slot;
    }

    let mut trips: Vec<(usize, usize, f64)> = g
        .adjacency()
        .triplets()
        .map(|(r, c, w)| (new_index[r], new_index[c], w))
        .collect();
    for &(u, w) in &injected {
        trips.push((new_index[u], new_index[w], 1.0));
        trips.push((new_index[w], new_index[u], 1.0));
    }
    let adjacency = CsrMatrix::from_triplets(total, total, &trips, Combine::Max);
    let shuffled_labels: Vec<String> = order.iter().map(|&old| labels[old].clone()).collect();
    let (a, b) = g.dist_params();
    let noisy = MeasureGraph::with_estimated_distribution(shuffled_labels, adjacency, a, b)?;
    Ok((noisy, truth))
}
