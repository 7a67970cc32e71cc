//! Solver configuration and the named presets used by the experiments.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{GwError, Result};
use crate::math;

/// All tunables of the transport solver and the task drivers.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverConfig {
    /// Proximal weight of the KL term in the transport update.
    pub gamma: f64,
    /// Weight of the node-prior cost `|mu_i^s - mu_j^t|` added to the loss.
    pub tau: f64,
    /// Node-distribution shape: `mu ∝ (degree + a)^b`.
    pub a: f64,
    pub b: f64,
    /// Fan-out of the recursive K-way decomposition.
    pub k: usize,
    /// Number of recursion levels; 0 degenerates to direct matching.
    pub r: usize,
    /// Barycenter weights; `None` means uniform `1/M`.
    pub omega: Option<Vec<f64>>,
    /// Cap on proximal-gradient outer iterations.
    pub outer_iters: usize,
    /// Sinkhorn sweeps per outer iteration.
    pub inner_sinkhorn_iters: usize,
    /// Cap on barycenter alternations.
    pub bary_iters: usize,
    /// Outer-iteration cap for each per-graph transport solve inside a
    /// barycenter alternation; `None` uses `outer_iters`. Small values give
    /// the interleaved scheme where transports and the adjacency co-evolve,
    /// which keeps the induced partitions of different graphs aligned.
    pub bary_solver_iters: Option<usize>,
    /// Relative-change stop for the barycenter adjacency.
    pub bary_tol: f64,
    /// Relative-change stop for the transport plan; also the marginal
    /// feasibility target of the returned coupling.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gamma: 1e-2,
            tau: 0.0,
            a: 0.0,
            b: 1.0,
            k: 2,
            r: 3,
            omega: None,
            outer_iters: 200,
            inner_sinkhorn_iters: 1,
            bary_iters: 30,
            bary_solver_iters: None,
            bary_tol: 1e-6,
            tol: 1e-8,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        fn bad(msg: impl Into<String>) -> Result<()> {
            Err(GwError::InvalidConfig(msg.into()))
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return bad("gamma must be positive and finite");
        }
        if self.tau < 0.0 || !self.tau.is_finite() {
            return bad("tau must be nonnegative");
        }
        if self.a < 0.0 || self.b < 0.0 {
            return bad("a and b must be nonnegative");
        }
        if self.k < 2 {
            return bad("k must be at least 2");
        }
        if self.outer_iters == 0 || self.inner_sinkhorn_iters == 0 || self.bary_iters == 0 {
            return bad("iteration counts must be at least 1");
        }
        if self.bary_solver_iters == Some(0) {
            return bad("bary_solver_iters must be at least 1 when set");
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.bary_tol.is_nan() || self.bary_tol <= 0.0 {
            return bad("tolerances must be positive");
        }
        if let Some(w) = &self.omega {
            if w.is_empty() || w.iter().any(|&x| x < 0.0) {
                return bad("omega must be nonempty and nonnegative");
            }
            let sum: f64 = w.iter().sum();
            if math::abs(sum - 1.0) > 1e-9 {
                return bad("omega must sum to 1");
            }
        }
        Ok(())
    }

    /// Barycenter weights for `m` graphs: the configured vector (validated
    /// against `m`) or uniform.
    pub fn resolve_omega(&self, m: usize) -> Result<Vec<f64>> {
        match &self.omega {
            Some(w) if w.len() == m => Ok(w.clone()),
            Some(w) => Err(GwError::DimensionMismatch(alloc::format!(
                "omega has {} entries for {} graphs",
                w.len(),
                m
            ))),
            None => Ok(alloc::vec![1.0 / m as f64; m]),
        }
    }
}

/// Named hyperparameter presets for the benchmark tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    SyntheticPartition,
    EuEmailPartition,
    IndianVillagePartition,
    SyntheticMatch,
    YeastMatch,
    Mc3Match,
    YeastMultiMatch,
    YeastHumanMatch,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::SyntheticPartition,
        Preset::EuEmailPartition,
        Preset::IndianVillagePartition,
        Preset::SyntheticMatch,
        Preset::YeastMatch,
        Preset::Mc3Match,
        Preset::YeastMultiMatch,
        Preset::YeastHumanMatch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::SyntheticPartition => "synthetic-partition",
            Preset::EuEmailPartition => "eu-email-partition",
            Preset::IndianVillagePartition => "indian-village-partition",
            Preset::SyntheticMatch => "synthetic-match",
            Preset::YeastMatch => "yeast-match",
            Preset::Mc3Match => "mc3-match",
            Preset::YeastMultiMatch => "yeast-multi-match",
            Preset::YeastHumanMatch => "yeast-human-match",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.iter().copied().find(|p| p.name() == name)
    }

    pub fn config(self) -> SolverConfig {
        let base = SolverConfig::default();
        match self {
            Preset::SyntheticPartition => SolverConfig {
                gamma: 1e-2,
                tau: 0.0,
                a: 0.0,
                b: 1.0,
                outer_iters: 2000,
                ..base
            },
            Preset::EuEmailPartition => SolverConfig {
                gamma: 5e-7,
                tau: 0.0,
                a: 0.0,
                b: 1e-3,
                outer_iters: 2000,
                ..base
            },
            Preset::IndianVillagePartition => SolverConfig {
                gamma: 5e-5,
                tau: 0.0,
                a: 5e-1,
                b: 1.0,
                outer_iters: 2000,
                ..base
            },
            Preset::SyntheticMatch => SolverConfig {
                gamma: 2e-1,
                tau: 1e1,
                a: 0.0,
                b: 1.0,
                k: 2,
                r: 3,
                outer_iters: 2000,
                bary_iters: 10,
                bary_solver_iters: Some(50),
                ..base
            },
            Preset::YeastMatch => SolverConfig {
                gamma: 2.5e-2,
                tau: 1e3,
                a: 0.0,
                b: 1.0,
                k: 2,
                r: 3,
                ..base
            },
            Preset::Mc3Match => SolverConfig {
                gamma: 1e-3,
                tau: 1e1,
                a: 1.0,
                b: 1e-1,
                k: 2,
                r: 3,
                ..base
            },
            Preset::YeastMultiMatch => SolverConfig {
                gamma: 2.5e-2,
                tau: 1e3,
                a: 0.0,
                b: 1.0,
                k: 8,
                r: 1,
                ..base
            },
            Preset::YeastHumanMatch => SolverConfig {
                gamma: 5e-2,
                tau: 1.0,
                a: 0.0,
                b: 5e-1,
                k: 2,
                r: 4,
                ..base
            },
        }
    }
}
