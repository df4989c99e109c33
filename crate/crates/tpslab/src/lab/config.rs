//! Experiment configuration: a single JSON document pins down everything a
//! run needs, including the seed, so results are reproducible bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::matrix::ComplexMatrix;
use crate::numkernel::random::RngStream;

use super::presets::preset_matrix;

/// Which experiment to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Build a family of structures from symmetries of one Hamiltonian and
    /// certify how many are nonequivalent to the starting one.
    CounterexampleFamily,
    /// Show an evolution entangling one structure, which rules out any
    /// relabeling onto a structure where the same evolution stays separable.
    EntanglingContradiction,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::CounterexampleFamily => "counterexample-family",
            ExperimentKind::EntanglingContradiction => "entangling-contradiction",
        }
    }
}

/// Where the Hamiltonian matrix comes from.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianSource {
    Preset { preset: String },
    Matrix { matrix: ComplexMatrix },
}

impl HamiltonianSource {
    /// Materializes the matrix, drawing from `rng` when the source is a
    /// random ensemble, and checks it against the expected dimension.
    pub fn materialize(&self, expected_dim: usize, rng: &mut RngStream) -> Result<ComplexMatrix> {
        let m = match self {
            HamiltonianSource::Preset { preset } => preset_matrix(preset, rng)?,
            HamiltonianSource::Matrix { matrix } => matrix.clone(),
        };
        if !m.is_square() || m.dim() != expected_dim {
            return Err(Error::DimensionMismatch(format!(
                "hamiltonian is {}x{} but the factor dimensions multiply to {expected_dim}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(m)
    }

    pub fn label(&self) -> String {
        match self {
            HamiltonianSource::Preset { preset } => preset.clone(),
            HamiltonianSource::Matrix { matrix } => format!("matrix({}x{})", matrix.rows(), matrix.cols()),
        }
    }
}

/// An inclusive, evenly spaced time grid with `count` points.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn times(&self) -> Result<Vec<f64>> {
        if self.count == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidInput(format!(
                "bad time grid: start={} stop={} count={}",
                self.start, self.stop, self.count
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        Ok((0..self.count).map(|k| self.start + step * k as f64).collect())
    }
}

fn default_transforms() -> usize {
    10
}

fn default_controls() -> usize {
    5
}

fn default_haar_probes() -> usize {
    crate::entangle::DEFAULT_HAAR_PROBES
}

fn default_threshold() -> f64 {
    crate::tps::CERT_THRESHOLD
}

fn default_initial_state() -> String {
    "basis:0".to_string()
}

/// Full description of one experiment run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Seed for every random draw in the run.
    pub seed: u64,
    /// Factor dimensions of the reference structure.
    pub factor_dims: Vec<usize>,
    pub hamiltonian: HamiltonianSource,
    /// Directory name under the output root; defaults to the kind.
    #[serde(default)]
    pub run_id: Option<String>,
    /// Family size for counterexample runs.
    #[serde(default = "default_transforms")]
    pub transforms: usize,
    /// Equivalent-by-construction control trials that must never certify.
    #[serde(default = "default_controls")]
    pub controls: usize,
    /// Haar probes appended to the canonical probe family.
    #[serde(default = "default_haar_probes")]
    pub haar_probes: usize,
    /// Entropy-multiset discrepancy above which nonequivalence is certified.
    #[serde(default = "default_threshold")]
    pub entropy_threshold: f64,
    /// Time grid for evolution transforms and trajectories.
    #[serde(default)]
    pub t_grid: Option<TimeGrid>,
    /// Initial state spec: `basis:K`, `uniform`, or `haar`.
    #[serde(default = "default_initial_state")]
    pub initial_state: String,
    /// Explicit eigenvalue clustering tolerance; picked from the spectral
    /// norm when absent.
    #[serde(default)]
    pub cluster_tol: Option<f64>,
}

impl ExperimentConfig {
    pub fn run_id(&self) -> String {
        self.run_id.clone().unwrap_or_else(|| self.kind.as_str().to_string())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
