//! Barycenter graphs: the weighted GW average of several observed graphs.
//!
//! The barycenter node distribution comes from sorted-interpolation
//! resampling of the observed distributions and stays fixed; the soft
//! adjacency alternates with the transports:
//!
//! ```text
//! C̄ = (1 / μ̄μ̄ᵀ) Σ_m ω_m T_mᵀ C_m T_m      (elementwise division)
//! ```
//!
//! starting from the self-loop-only matrix `diag(μ̄)`, i.e. isolated but
//! self-connected super nodes.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::config::SolverConfig;
use crate::dense::DenseMatrix;
use crate::error::{GwError, Result};
use crate::graph::{resample_distribution, MeasureGraph};
use crate::solver::{prox_grad_warm, Coupling};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone)]
pub struct Barycenter {
    /// The learned graph: soft adjacency `C̄` and fixed distribution `μ̄`.
    pub graph: MeasureGraph,
    /// Transport from each observed graph to the barycenter, in input order.
    pub transports: Vec<Coupling>,
    /// Alternations performed.
    pub iterations: usize,
}

/// One adjacency update: `C̄ = (Σ_m ω_m T_mᵀ C_m T_m) / (μ̄ μ̄ᵀ)`.
pub fn update_barycenter_adjacency(
    transports: &[&DenseMatrix],
    adjacencies: &[&CsrMatrix],
    omega: &[f64],
    mu_bar: &[f64],
) -> Result<DenseMatrix> {
    if transports.len() != adjacencies.len() || transports.len() != omega.len() {
        return Err(GwError::DimensionMismatch(alloc::format!(
            "{} transports, {} adjacencies, {} weights",
            transports.len(),
            adjacencies.len(),
            omega.len()
        )));
    }
    if mu_bar.iter().any(|&m| m <= 0.0) {
        return Err(GwError::DegenerateDistribution);
    }
    let size = mu_bar.len();
    let mut acc = DenseMatrix::zeros(size, size);
    for ((t, c), &w) in transports.iter().zip(adjacencies).zip(omega) {
        if t.cols() != size || c.rows() != t.rows() || c.cols() != t.rows() {
            return Err(GwError::DimensionMismatch(alloc::format!(
                "transport {}x{} against {}x{} adjacency and {} barycenter nodes",
                t.rows(),
                t.cols(),
                c.rows(),
                c.cols(),
                size
            )));
        }
        let ct = c.mul_dense(t);
        let s = t.transpose_mul(&ct);
        for (a, v) in acc.data_mut().iter_mut().zip(s.data()) {
            *a += w * v;
        }
    }
    for k in 0..size {
        let mk = mu_bar[k];
        for (l, v) in acc.row_mut(k).iter_mut().enumerate() {
            *v /= mk * mu_bar[l];
        }
    }
    Ok(acc)
}

/// Initial barycenter graph: distribution resampled from the observed ones,
/// adjacency `diag(μ̄)`.
pub(crate) fn initial_barycenter(
    graphs: &[MeasureGraph],
    omega: &[f64],
    bar_size: usize,
) -> Result<MeasureGraph> {
    let mus: Vec<&[f64]> = graphs.iter().map(|g| g.mu()).collect();
    let mu_bar = resample_distribution(&mus, omega, bar_size)?;
    let labels = (0..bar_size).map(|i| i.to_string()).collect();
    MeasureGraph::from_parts(labels, CsrMatrix::from_diag(&mu_bar), mu_bar.clone())
}

/// Learn a barycenter of `bar_size` nodes for the observed graphs.
///
/// Each alternation re-solves the `M` transports against the current
/// barycenter (warm-started from the previous alternation) and then applies
/// the adjacency update; it stops when the relative Frobenius change of `C̄`
/// drops below `cfg.bary_tol` or after `cfg.bary_iters` alternations.
pub fn learn_barycenter(
    graphs: &[MeasureGraph],
    cfg: &SolverConfig,
    bar_size: usize,
) -> Result<Barycenter> {
    cfg.validate()?;
    if graphs.is_empty() {
        return Err(GwError::InvalidConfig("barycenter needs at least one graph".into()));
    }
    if bar_size == 0 {
        return Err(GwError::InvalidConfig("barycenter size must be at least 1".into()));
    }
    let m = graphs.len();
    let omega = cfg.resolve_omega(m)?;
    let mut bary = initial_barycenter(graphs, &omega, bar_size)?;

    // Same jitter seed for every graph: structurally identical inputs keep
    // exactly aligned transports.
    let mut plans: Vec<DenseMatrix> = graphs
        .iter()
        .map(|g| crate::solver::jittered_product(g.mu(), bary.mu(), cfg.seed))
        .collect();
    let mut couplings: Vec<Option<Coupling>> = alloc::vec![None; m];
    let mut c_prev = bary.adjacency().to_dense();
    let mut iterations = 0;

    let mut solve_cfg = cfg.clone();
    solve_cfg.outer_iters = cfg.bary_solver_iters.unwrap_or(cfg.outer_iters);
    for _ in 0..cfg.bary_iters {
        for (idx, g) in graphs.iter().enumerate() {
            let res = prox_grad_warm(g, &bary, &solve_cfg, Some(plans[idx].clone())).map_err(|e| {
                GwError::Barycenter { graph_index: idx, source: alloc::boxed::Box::new(e) }
            })?;
            plans[idx] = res.coupling.matrix.clone();
            couplings[idx] = Some(res.coupling);
        }
        let plan_refs: Vec<&DenseMatrix> = plans.iter().collect();
        let adj_refs: Vec<&CsrMatrix> = graphs.iter().map(|g| g.adjacency()).collect();
        let c_next = update_barycenter_adjacency(&plan_refs, &adj_refs, &omega, bary.mu())?;

        let mut diff_sq = 0.0;
        for (a, b) in c_next.data().iter().zip(c_prev.data()) {
            let d = a - b;
            diff_sq += d * d;
        }
        let rel = crate::math::sqrt(diff_sq) / c_prev.frob_norm().max(1e-30);

        bary = MeasureGraph::from_parts(
            bary.labels().to_vec(),
            CsrMatrix::from_dense(&c_next),
            bary.mu().to_vec(),
        )?;
        c_prev = c_next;
        iterations += 1;
        if rel < cfg.bary_tol {
            break;
        }
    }

    let transports = couplings.into_iter().map(|c| c.expect("at least one alternation")).collect();
    Ok(Barycenter { graph: bary, transports, iterations })
}
