//! Run manifests: the resolved configuration, input digests and metric
//! report of one command invocation, written next to the primary output.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use gwlearn::metrics::MetricReport;
use gwlearn::SolverConfig;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: SolverConfig,
    pub inputs: Vec<InputDigest>,
    pub seed: u64,
    pub wall_time_seconds: f64,
    pub report: MetricReport,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: SolverConfig) -> Self {
        Self {
            command: command.into(),
            argv: std::env::args().collect(),
            seed: config.seed,
            config,
            inputs: Vec::new(),
            wall_time_seconds: 0.0,
            report: MetricReport::default(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_file(path)?,
        });
        Ok(())
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Write the manifest as `<output>.manifest.json`.
    pub fn write_next_to(&self, output: &Path) -> Result<PathBuf> {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        let path = output.with_file_name(name);
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, json)
            .with_context(|| format!("writing manifest {}", path.display()))?;
        Ok(path)
    }
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes =
        std::fs::read(path).with_context(|| format!("digesting input {}", path.display()))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}
