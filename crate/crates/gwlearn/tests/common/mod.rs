//! Independent oracles and fixtures shared by the integration suites.
//!
//! Everything here deliberately avoids the crate's own loss/solver code
//! paths: objectives come from the quadruple sum, couplings from the
//! northwest-corner rule, and symmetry checks from permutation brute force.

#![allow(dead_code)]

use gwlearn::sparse::Combine;
use gwlearn::{CsrMatrix, DenseMatrix, MeasureGraph};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Brute-force p=2 objective: `Σ_{i,j,i',j'} (Cs_ij − Ct_i'j')² T_ii' T_jj'`.
pub fn quad_sum_objective(cs: &DenseMatrix, ct: &DenseMatrix, t: &DenseMatrix) -> f64 {
    let (ns, nt) = (t.rows(), t.cols());
    let mut total = 0.0;
    for i in 0..ns {
        for j in 0..ns {
            for ip in 0..nt {
                for jp in 0..nt {
                    let d = cs[(i, j)] - ct[(ip, jp)];
                    total += d * d * t[(i, ip)] * t[(j, jp)];
                }
            }
        }
    }
    total
}

/// Northwest-corner transport plan: feasible for `(mu_s, mu_t)` up to
/// floating-point subtraction error.
pub fn northwest_corner(mu_s: &[f64], mu_t: &[f64]) -> DenseMatrix {
    let (ns, nt) = (mu_s.len(), mu_t.len());
    let mut t = DenseMatrix::zeros(ns, nt);
    let mut rows = mu_s.to_vec();
    let mut cols = mu_t.to_vec();
    let (mut i, mut j) = (0, 0);
    while i < ns && j < nt {
        let x = rows[i].min(cols[j]);
        t[(i, j)] = x;
        if rows[i] <= cols[j] {
            cols[j] -= rows[i];
            rows[i] = 0.0;
            i += 1;
        } else {
            rows[i] -= cols[j];
            cols[j] = 0.0;
            j += 1;
        }
    }
    t
}

/// A random feasible plan: a convex mixture of the product plan and
/// northwest-corner plans of permuted marginals.
pub fn random_feasible_coupling(mu_s: &[f64], mu_t: &[f64], rng: &mut ChaCha8Rng) -> DenseMatrix {
    let (ns, nt) = (mu_s.len(), mu_t.len());
    let mut mix = DenseMatrix::outer(mu_s, mu_t);
    let mut weights = vec![rng.gen::<f64>() + 0.1];
    let mut parts = Vec::new();
    for _ in 0..3 {
        let mut perm_s: Vec<usize> = (0..ns).collect();
        let mut perm_t: Vec<usize> = (0..nt).collect();
        perm_s.shuffle(rng);
        perm_t.shuffle(rng);
        let ps: Vec<f64> = perm_s.iter().map(|&i| mu_s[i]).collect();
        let pt: Vec<f64> = perm_t.iter().map(|&j| mu_t[j]).collect();
        let nw = northwest_corner(&ps, &pt);
        let mut un = DenseMatrix::zeros(ns, nt);
        for a in 0..ns {
            for b in 0..nt {
                un[(perm_s[a], perm_t[b])] = nw[(a, b)];
            }
        }
        parts.push(un);
        weights.push(rng.gen::<f64>() + 0.1);
    }
    let total: f64 = weights.iter().sum();
    for v in mix.data_mut() {
        *v *= weights[0] / total;
    }
    for (part, w) in parts.iter().zip(&weights[1..]) {
        for (m, p) in mix.data_mut().iter_mut().zip(part.data()) {
            *m += (w / total) * p;
        }
    }
    mix
}

/// Random strictly positive simplex vector.
pub fn random_simplex(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 0.05).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

/// Random symmetric binary adjacency with a spanning path (no isolated nodes).
pub fn random_adjacency(n: usize, extra_density: f64, rng: &mut ChaCha8Rng) -> CsrMatrix {
    let mut trips = Vec::new();
    for i in 0..n.saturating_sub(1) {
        trips.push((i, i + 1, 1.0));
        trips.push((i + 1, i, 1.0));
    }
    for i in 0..n {
        for j in (i + 2)..n {
            if rng.gen::<f64>() < extra_density {
                trips.push((i, j, 1.0));
                trips.push((j, i, 1.0));
            }
        }
    }
    CsrMatrix::from_triplets(n, n, &trips, Combine::Max)
}

/// Random measure graph over `n` labelled nodes.
pub fn random_graph(n: usize, extra_density: f64, rng: &mut ChaCha8Rng) -> MeasureGraph {
    let adjacency = random_adjacency(n, extra_density, rng);
    let labels = (0..n).map(|i| i.to_string()).collect();
    MeasureGraph::with_estimated_distribution(labels, adjacency, 0.0, 1.0).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for sub in permutations(n - 1) {
        for slot in 0..n {
            let mut p = sub.clone();
            p.insert(slot, n - 1);
            out.push(p);
        }
    }
    out
}

/// Number of adjacency-preserving node permutations (brute force; n ≤ 8).
pub fn automorphism_count(g: &MeasureGraph) -> usize {
    let n = g.num_nodes();
    assert!(n <= 8, "brute-force automorphism check is factorial");
    let dense = g.adjacency().to_dense();
    permutations(n)
        .into_iter()
        .filter(|p| {
            (0..n).all(|i| (0..n).all(|j| dense[(p[i], p[j])] == dense[(i, j)]))
        })
        .count()
}

/// The permutation minimizing the p=2 objective over all bijections
/// (brute force; equal sizes, n ≤ 8). Returns `(best_perm, best_cost)`
/// where the plan puts mass `mu_s[i]` on `(i, perm[i])`.
pub fn best_permutation_objective(g: &MeasureGraph) -> (Vec<usize>, f64) {
    let n = g.num_nodes();
    assert!(n <= 8);
    let dense = g.adjacency().to_dense();
    let mu = g.mu();
    let mut best = (Vec::new(), f64::INFINITY);
    for p in permutations(n) {
        let mut cost = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = dense[(i, j)] - dense[(p[i], p[j])];
                cost += d * d * mu[i] * mu[j];
            }
        }
        if cost < best.1 {
            best = (p, cost);
        }
    }
    best
}

/// Copy of `g` with node order permuted (labels preserved, so the identity
/// on labels is the ground-truth correspondence).
pub fn permuted_copy(g: &MeasureGraph, seed: u64) -> MeasureGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.num_nodes();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut pos = vec![0usize; n];
    for (new, &old) in order.iter().enumerate() {
        pos[old] = new;
    }
    let trips: Vec<(usize, usize, f64)> =
        g.adjacency().triplets().map(|(r, c, v)| (pos[r], pos[c], v)).collect();
    let labels: Vec<String> = order.iter().map(|&old| g.label(old).to_string()).collect();
    let mu: Vec<f64> = order.iter().map(|&old| g.mu()[old]).collect();
    let adj = CsrMatrix::from_triplets(n, n, &trips, Combine::Sum);
    MeasureGraph::from_parts(labels, adj, mu).unwrap()
}

/// Identity pairing on the labels of `g`.
pub fn identity_pairs(g: &MeasureGraph) -> gwlearn::CorrespondenceSet {
    gwlearn::CorrespondenceSet::from_tuples(
        g.labels().iter().map(|l| vec![l.clone(), l.clone()]).collect(),
    )
    .unwrap()
}
