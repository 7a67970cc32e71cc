//! Gromov-Wasserstein discrepancy via a regularized proximal-gradient method.
//!
//! For measure graphs `Gs`, `Gt` and the p=2 objective
//! `Σ |c_ij^s − c_i'j'^t|² T_ii' T_jj'`, each outer iteration linearizes the
//! objective around the current plan, adds a KL proximal term with weight
//! `gamma`, and solves the resulting entropic sub-problem by Sinkhorn
//! scaling:
//!
//! ```text
//! G       = exp(−(τ·C_node + L(Cs, Ct, T)) / γ) ⊙ T
//! b       = μt / (Gᵀ a),   a = μs / (G b)
//! T_next  = diag(a) · G · diag(b)
//! ```
//!
//! with `L(Cs, Ct, T) = (Cs∘Cs)·μs·1ᵀ + 1·μtᵀ·(Ct∘Ct)ᵀ − 2·Cs·T·Ctᵀ`, whose
//! inner product with a feasible `T` equals the quadratic objective. The
//! cross term is evaluated as two sparse-dense products, which is what makes
//! the update `O(nnz_s·|Vt| + |Vs|·nnz_t)`. The node prior `C_node` has
//! entries `|μ_i^s − μ_j^t|` and steers mass toward nodes of similar local
//! density.

#![allow(clippy::needless_range_loop)] // index loops fuse several row buffers

use alloc::vec;
use alloc::vec::Vec;

use crate::config::SolverConfig;
use crate::dense::DenseMatrix;
use crate::error::{GwError, Result};
use crate::graph::MeasureGraph;
use crate::math;
use crate::sparse::{dense_mul_csr_transpose_into, CsrMatrix};

/// Sinkhorn denominators are clamped below by this to avoid division by
/// zero. The clamp sits at the smallest normal float on purpose: a larger
/// floor (say 1e-16) silently caps the scaling of rows whose kernel entries
/// sit far below the global exponent shift, which breaks their marginals
/// and collapses the row support within a few iterations.
const DIV_GUARD: f64 = f64::MIN_POSITIVE;
/// Cap on the sweeps that complete the final projection.
const FINISH_SWEEP_CAP: usize = 200;

/// A transport plan between two node sets, with its L1 marginal errors.
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub matrix: DenseMatrix,
    pub row_marginal_error: f64,
    pub col_marginal_error: f64,
}

impl Coupling {
    /// Wrap a plan, measuring `‖T·1 − μs‖₁` and `‖Tᵀ·1 − μt‖₁`.
    pub fn from_matrix(matrix: DenseMatrix, mu_s: &[f64], mu_t: &[f64]) -> Self {
        let rows = matrix.row_sums();
        let cols = matrix.col_sums();
        let row_marginal_error =
            rows.iter().zip(mu_s).map(|(r, m)| math::abs(r - m)).sum();
        let col_marginal_error =
            cols.iter().zip(mu_t).map(|(c, m)| math::abs(c - m)).sum();
        Self { matrix, row_marginal_error, col_marginal_error }
    }
}

/// Outcome of a proximal-gradient solve.
#[derive(Debug, Clone, PartialEq)]
pub struct GwResult {
    pub coupling: Coupling,
    /// `⟨L(T̂), T̂⟩`, the squared GW discrepancy at the returned plan.
    pub discrepancy: f64,
    /// Objective value at each outer iterate, starting from the initial plan.
    pub objective_trace: Vec<f64>,
    /// Outer iterations actually performed.
    pub iterations: usize,
    /// Whether the relative-change test fired before the iteration cap.
    pub converged: bool,
}

/// Node-prior cost matrix `c_ij = |μ_i^s − μ_j^t|`.
pub fn node_cost_matrix(mu_s: &[f64], mu_t: &[f64]) -> DenseMatrix {
    DenseMatrix::from_fn(mu_s.len(), mu_t.len(), |i, j| math::abs(mu_s[i] - mu_t[j]))
}

/// Relative amplitude of the symmetry-breaking jitter on reference-target
/// initializations.
const INIT_JITTER: f64 = 1e-3;

/// The product plan with a seeded multiplicative jitter.
///
/// Transports toward self-loop-only reference targets (partitioning, initial
/// barycenters) start from an exactly column-symmetric state whenever the
/// node distribution has repeated values; the multiplicative update then
/// preserves that symmetry forever and argmax ties collapse every node into
/// cluster 0. The jitter seeds an asymmetry for the update to amplify while
/// keeping runs reproducible.
pub(crate) fn jittered_product(mu_s: &[f64], mu_t: &[f64], seed: u64) -> DenseMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(mu_s.len(), mu_t.len(), |i, j| {
        mu_s[i] * mu_t[j] * (1.0 + INIT_JITTER * (2.0 * rng.gen::<f64>() - 1.0))
    })
}

fn check_dims(
    cs: &CsrMatrix,
    ct: &CsrMatrix,
    t: &DenseMatrix,
    mu_s: &[f64],
    mu_t: &[f64],
) -> Result<()> {
    let ok = cs.rows() == cs.cols()
        && ct.rows() == ct.cols()
        && cs.rows() == mu_s.len()
        && ct.rows() == mu_t.len()
        && t.rows() == mu_s.len()
        && t.cols() == mu_t.len();
    if ok {
        Ok(())
    } else {
        Err(GwError::DimensionMismatch(alloc::format!(
            "loss operands: Cs {}x{}, Ct {}x{}, T {}x{}, mu {}|{}",
            cs.rows(),
            cs.cols(),
            ct.rows(),
            ct.cols(),
            t.rows(),
            t.cols(),
            mu_s.len(),
            mu_t.len()
        )))
    }
}

/// `(C∘C)·mu`, the degree-style terms of the loss that do not depend on `T`.
fn squared_adjacency_mass(c: &CsrMatrix, mu: &[f64]) -> Vec<f64> {
    c.map_values(|v| v * v).mul_vec(mu)
}

/// Loss matrix `L(Cs, Ct, T)` of the p=2 objective.
pub fn loss_matrix(
    cs: &CsrMatrix,
    ct: &CsrMatrix,
    t: &DenseMatrix,
    mu_s: &[f64],
    mu_t: &[f64],
) -> Result<DenseMatrix> {
    check_dims(cs, ct, t, mu_s, mu_t)?;
    let f = squared_adjacency_mass(cs, mu_s);
    let g = squared_adjacency_mass(ct, mu_t);
    let prod = cs.mul_dense(t);
    let mut cross = DenseMatrix::zeros(t.rows(), t.cols());
    dense_mul_csr_transpose_into(&prod, ct, &mut cross);
    let mut l = cross;
    for i in 0..t.rows() {
        let fi = f[i];
        for (j, v) in l.row_mut(i).iter_mut().enumerate() {
            *v = fi + g[j] - 2.0 * *v;
        }
    }
    Ok(l)
}

/// The p=2 objective `⟨L(T), T⟩` at an arbitrary plan `T`.
pub fn gw_discrepancy_value(
    cs: &CsrMatrix,
    ct: &CsrMatrix,
    t: &DenseMatrix,
    mu_s: &[f64],
    mu_t: &[f64],
) -> Result<f64> {
    Ok(loss_matrix(cs, ct, t, mu_s, mu_t)?.inner(t))
}

/// Compute the GW optimal transport between `gs` and `gt`.
pub fn prox_grad(gs: &MeasureGraph, gt: &MeasureGraph, cfg: &SolverConfig) -> Result<GwResult> {
    prox_grad_warm(gs, gt, cfg, None)
}

/// Like [`prox_grad`], starting from `init` instead of the product plan
/// `μs·μtᵀ`. Used by the barycenter alternations to continue from the
/// previous transport.
pub fn prox_grad_warm(
    gs: &MeasureGraph,
    gt: &MeasureGraph,
    cfg: &SolverConfig,
    init: Option<DenseMatrix>,
) -> Result<GwResult> {
    cfg.validate()?;
    let (cs, ct) = (gs.adjacency(), gt.adjacency());
    let (mu_s, mu_t) = (gs.mu(), gt.mu());
    let (ns, nt) = (mu_s.len(), mu_t.len());

    let mut t = match init {
        Some(t0) => {
            check_dims(cs, ct, &t0, mu_s, mu_t)?;
            t0
        }
        None => DenseMatrix::outer(mu_s, mu_t),
    };

    let f = squared_adjacency_mass(cs, mu_s);
    let g = squared_adjacency_mass(ct, mu_t);
    let inv_gamma = 1.0 / cfg.gamma;
    let tau = cfg.tau;

    let mut scale_a: Vec<f64> = mu_s.to_vec();
    let mut scale_b: Vec<f64> = vec![0.0; nt];
    let mut kernel = DenseMatrix::zeros(ns, nt);
    let mut prod = DenseMatrix::zeros(ns, nt);
    let mut cross = DenseMatrix::zeros(ns, nt);
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;

    for n in 0..cfg.outer_iters {
        // L(T) and the scaling exponents in one pass; record the objective at T.
        cs.mul_dense_into(&t, &mut prod);
        dense_mul_csr_transpose_into(&prod, ct, &mut cross);
        let mut objective = 0.0;
        let mut min_exponent = f64::INFINITY;
        for i in 0..ns {
            let fi = f[i];
            let mi = mu_s[i];
            let t_row = t.row(i);
            let c_row = cross.row(i);
            let e_row = kernel.row_mut(i);
            for j in 0..nt {
                let l = fi + g[j] - 2.0 * c_row[j];
                objective += l * t_row[j];
                let e = (l + tau * math::abs(mi - mu_t[j])) * inv_gamma;
                e_row[j] = e;
                if e < min_exponent {
                    min_exponent = e;
                }
            }
        }
        trace.push(objective);

        // G = exp(−(E − min E)) ⊙ T. The scalar shift leaves every Sinkhorn
        // quantity unchanged (it is absorbed by the scalings) but prevents
        // the kernel from underflowing uniformly.
        let mut col_nonzero = vec![false; nt];
        let mut all_rows_ok = true;
        let mut finite = true;
        for i in 0..ns {
            let t_row = t.row(i);
            let k_row = kernel.row_mut(i);
            let mut row_nonzero = false;
            for j in 0..nt {
                let k = math::exp(min_exponent - k_row[j]) * t_row[j];
                k_row[j] = k;
                finite &= k.is_finite();
                if k > 0.0 {
                    row_nonzero = true;
                    col_nonzero[j] = true;
                }
            }
            all_rows_ok &= row_nonzero;
        }
        if !finite || !all_rows_ok || col_nonzero.iter().any(|ok| !ok) {
            return Err(GwError::GammaTooSmall { iteration: n });
        }

        for _ in 0..cfg.inner_sinkhorn_iters {
            sinkhorn_sweep(&kernel, mu_s, mu_t, &mut scale_a, &mut scale_b);
        }

        // T_next = diag(a)·G·diag(b); reuse `prod` as the staging buffer.
        let mut diff_sq = 0.0;
        let mut prev_sq = 0.0;
        for i in 0..ns {
            let ai = scale_a[i];
            let k_row = kernel.row(i);
            let t_row = t.row(i);
            let next_row = prod.row_mut(i);
            for j in 0..nt {
                let v = ai * k_row[j] * scale_b[j];
                let d = v - t_row[j];
                diff_sq += d * d;
                prev_sq += t_row[j] * t_row[j];
                next_row[j] = v;
            }
        }
        core::mem::swap(&mut t, &mut prod);
        iterations = n + 1;
        if math::sqrt(diff_sq) < cfg.tol * math::sqrt(prev_sq) {
            converged = true;
            break;
        }
    }

    // Complete the final projection so the returned plan meets the marginal
    // tolerance even when the outer loop stopped at the iteration cap.
    for _ in 0..FINISH_SWEEP_CAP {
        let qt = kernel_t_vec(&kernel, &scale_a);
        let col_err: f64 = qt
            .iter()
            .zip(&scale_b)
            .zip(mu_t)
            .map(|((q, b), m)| math::abs(q * b - m))
            .sum();
        let p = kernel_vec(&kernel, &scale_b);
        let row_err: f64 = p
            .iter()
            .zip(&scale_a)
            .zip(mu_s)
            .map(|((p, a), m)| math::abs(p * a - m))
            .sum();
        if row_err <= cfg.tol && col_err <= cfg.tol {
            break;
        }
        sinkhorn_sweep(&kernel, mu_s, mu_t, &mut scale_a, &mut scale_b);
    }
    for i in 0..ns {
        let ai = scale_a[i];
        let k_row = kernel.row(i);
        for (j, v) in t.row_mut(i).iter_mut().enumerate() {
            *v = ai * k_row[j] * scale_b[j];
        }
    }
    round_to_polytope(&mut t, mu_s, mu_t);

    // Discrepancy at the returned plan.
    cs.mul_dense_into(&t, &mut prod);
    dense_mul_csr_transpose_into(&prod, ct, &mut cross);
    let mut discrepancy = 0.0;
    for i in 0..ns {
        let fi = f[i];
        let t_row = t.row(i);
        let c_row = cross.row(i);
        for j in 0..nt {
            discrepancy += (fi + g[j] - 2.0 * c_row[j]) * t_row[j];
        }
    }
    discrepancy = discrepancy.max(0.0);

    Ok(GwResult {
        coupling: Coupling::from_matrix(t, mu_s, mu_t),
        discrepancy,
        objective_trace: trace,
        iterations,
        converged,
    })
}

/// Round a nonnegative plan onto `Π(μs, μt)`: scale rows and columns down
/// to their marginal caps, then spread the remaining deficit as the rank-one
/// product of the row and column deficits. The change is bounded by the
/// plan's marginal error, and the result is feasible to machine precision
/// even when the scaling kernel has decayed to a support too skewed for
/// Sinkhorn sweeps to finish rebalancing.
fn round_to_polytope(t: &mut DenseMatrix, mu_s: &[f64], mu_t: &[f64]) {
    let (ns, nt) = (mu_s.len(), mu_t.len());
    for i in 0..ns {
        let sum: f64 = t.row(i).iter().sum();
        if sum > mu_s[i] {
            let f = mu_s[i] / sum;
            for v in t.row_mut(i) {
                *v *= f;
            }
        }
    }
    let col_sums = t.col_sums();
    let mut col_scale = alloc::vec![1.0; nt];
    for j in 0..nt {
        if col_sums[j] > mu_t[j] {
            col_scale[j] = mu_t[j] / col_sums[j];
        }
    }
    for i in 0..ns {
        for (v, s) in t.row_mut(i).iter_mut().zip(&col_scale) {
            *v *= s;
        }
    }
    let row_deficit: Vec<f64> = t
        .row_sums()
        .iter()
        .zip(mu_s)
        .map(|(s, m)| (m - s).max(0.0))
        .collect();
    let col_deficit: Vec<f64> = t
        .col_sums()
        .iter()
        .zip(mu_t)
        .map(|(s, m)| (m - s).max(0.0))
        .collect();
    let total: f64 = row_deficit.iter().sum();
    if total > 0.0 {
        for i in 0..ns {
            let ri = row_deficit[i] / total;
            for (v, c) in t.row_mut(i).iter_mut().zip(&col_deficit) {
                *v += ri * c;
            }
        }
    }
}

/// One Sinkhorn sweep: `b = μt / (Gᵀa)` then `a = μs / (G b)`.
fn sinkhorn_sweep(
    kernel: &DenseMatrix,
    mu_s: &[f64],
    mu_t: &[f64],
    scale_a: &mut [f64],
    scale_b: &mut [f64],
) {
    let qt = kernel_t_vec(kernel, scale_a);
    for (b, (q, m)) in scale_b.iter_mut().zip(qt.iter().zip(mu_t)) {
        *b = m / q.max(DIV_GUARD);
    }
    let p = kernel_vec(kernel, scale_b);
    for (a, (p, m)) in scale_a.iter_mut().zip(p.iter().zip(mu_s)) {
        *a = m / p.max(DIV_GUARD);
    }
}

/// `Gᵀ·x`.
fn kernel_t_vec(kernel: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; kernel.cols()];
    for i in 0..kernel.rows() {
        let xi = x[i];
        for (o, k) in out.iter_mut().zip(kernel.row(i)) {
            *o += xi * k;
        }
    }
    out
}

/// `G·x`.
fn kernel_vec(kernel: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    (0..kernel.rows())
        .map(|i| kernel.row(i).iter().zip(x).map(|(k, b)| k * b).sum())
        .collect()
}
