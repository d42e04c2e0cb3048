//! Experiment plans: one JSON document describing the whole grid.
//!
//! A plan crosses benchmarks × runners (strategies and agents) × temperatures
//! × repeat runs. Each point of that grid is a [`Cell`], the unit of
//! scheduling and resume bookkeeping.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::AgentConfig;
use crate::bench::Benchmark;
use crate::gateway::{BackendConfig, BackendKind, MockScript};
use crate::seed;
use crate::strategy::StrategyConfig;

/// Overrides the backend `base_url` of any non-mock plan at load time.
pub const BACKEND_URL_ENV: &str = "HARNESS_BACKEND_URL";

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("cannot read plan {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("plan is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid plan: {0}")]
    Invalid(String),
}

/// One dataset to evaluate: which benchmark, where the file lives, and an
/// optional item cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkEntry {
    pub benchmark: Benchmark,
    pub path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
}

fn default_temperatures() -> Vec<f64> {
    vec![0.2]
}

fn default_runs() -> u32 {
    3
}

fn default_parallelism() -> usize {
    4
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// The full experiment description. Serializable so a run can be audited and
/// resumed against the exact grid that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub backend: BackendConfig,
    /// Required when `backend.kind` is `mock`; ignored otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mock_script: Option<MockScript>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strategies: Vec<StrategyConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub agents: Vec<AgentConfig>,
    pub benchmarks: Vec<BenchmarkEntry>,
    #[serde(default = "default_temperatures")]
    pub temperatures: Vec<f64>,
    #[serde(default = "default_runs")]
    pub runs: u32,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub rng_seed: u64,
}

impl ExperimentPlan {
    /// Parse a plan from JSON text and apply environment overrides.
    pub fn from_json(text: &str) -> Result<Self, PlanError> {
        let mut plan: ExperimentPlan = serde_json::from_str(text)?;
        plan.apply_env_overrides();
        Ok(plan)
    }

    pub fn load(path: &Path) -> Result<Self, PlanError> {
        let text = fs::read_to_string(path).map_err(|source| PlanError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    fn apply_env_overrides(&mut self) {
        if self.backend.kind == BackendKind::Mock {
            return;
        }
        if let Ok(url) = std::env::var(BACKEND_URL_ENV) {
            if !url.trim().is_empty() {
                self.backend.base_url = Some(url);
            }
        }
    }

    /// Reject grids that could not run: bad runner configs, illegal
    /// (runner, benchmark) pairs, or missing pieces.
    pub fn validate(&self) -> Result<(), PlanError> {
        self.backend
            .validate()
            .map_err(|e| PlanError::Invalid(format!("backend: {e}")))?;
        if self.backend.kind == BackendKind::Mock && self.mock_script.is_none() {
            return Err(PlanError::Invalid("mock backend requires mock_script".into()));
        }
        if self.strategies.is_empty() && self.agents.is_empty() {
            return Err(PlanError::Invalid("plan lists no strategies and no agents".into()));
        }
        if self.benchmarks.is_empty() {
            return Err(PlanError::Invalid("plan lists no benchmarks".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for entry in &self.benchmarks {
            if !seen.insert(entry.benchmark) {
                return Err(PlanError::Invalid(format!(
                    "benchmark '{}' listed twice",
                    entry.benchmark.as_str()
                )));
            }
        }
        if self.runs == 0 {
            return Err(PlanError::Invalid("runs must be at least 1".into()));
        }
        if self.parallelism == 0 {
            return Err(PlanError::Invalid("parallelism must be at least 1".into()));
        }
        if self.temperatures.is_empty() {
            return Err(PlanError::Invalid("temperatures must be non-empty".into()));
        }
        for &t in &self.temperatures {
            if !(0.0..=2.0).contains(&t) || !t.is_finite() {
                return Err(PlanError::Invalid(format!("temperature {t} out of range [0, 2]")));
            }
        }
        for cfg in &self.strategies {
            cfg.validate().map_err(|e| PlanError::Invalid(e.to_string()))?;
        }
        for cfg in &self.agents {
            cfg.validate().map_err(|e| PlanError::Invalid(e.to_string()))?;
        }
        for entry in &self.benchmarks {
            for cfg in &self.strategies {
                if !cfg.name.supports(entry.benchmark) {
                    return Err(PlanError::Invalid(format!(
                        "strategy '{}' is not defined for benchmark '{}'",
                        cfg.name.as_str(),
                        entry.benchmark.as_str()
                    )));
                }
            }
            for cfg in &self.agents {
                if !cfg.architecture.supports(entry.benchmark) {
                    return Err(PlanError::Invalid(format!(
                        "agent '{}' is not defined for benchmark '{}'",
                        cfg.architecture.as_str(),
                        entry.benchmark.as_str()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Stable fingerprint of the grid; persisted runs refuse to resume under a
    /// different plan.
    pub fn plan_hash(&self) -> String {
        let text = serde_json::to_string(self).expect("plan serializes");
        seed::sha256_hex(text.as_bytes())
    }

    /// Enumerate the grid in deterministic order: benchmark, runner
    /// (strategies first, in plan order), temperature, run index.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for entry in &self.benchmarks {
            for cfg in &self.strategies {
                self.push_cells(&mut cells, entry, CellRunner::Strategy(cfg.clone()));
            }
            for cfg in &self.agents {
                self.push_cells(&mut cells, entry, CellRunner::Agent(cfg.clone()));
            }
        }
        cells
    }

    fn push_cells(&self, cells: &mut Vec<Cell>, entry: &BenchmarkEntry, runner: CellRunner) {
        for &temperature in &self.temperatures {
            for run_index in 0..self.runs {
                cells.push(Cell {
                    benchmark: entry.benchmark,
                    runner: runner.at_temperature(temperature),
                    temperature,
                    run_index,
                });
            }
        }
    }
}

/// What executes the queries of a cell: a prompting strategy or a
/// tool-calling agent.
#[derive(Debug, Clone, PartialEq)]
pub enum CellRunner {
    Strategy(StrategyConfig),
    Agent(AgentConfig),
}

impl CellRunner {
    pub fn name(&self) -> &'static str {
        match self {
            CellRunner::Strategy(cfg) => cfg.name.as_str(),
            CellRunner::Agent(cfg) => cfg.architecture.as_str(),
        }
    }

    fn at_temperature(&self, temperature: f64) -> CellRunner {
        match self {
            CellRunner::Strategy(cfg) => CellRunner::Strategy(cfg.clone().at_temperature(temperature)),
            CellRunner::Agent(cfg) => CellRunner::Agent(cfg.clone().at_temperature(temperature)),
        }
    }
}

/// One grid point: a benchmark evaluated by one runner at one temperature in
/// one repeat run.
#[derive(Debug, Clone)]
pub struct Cell {
    pub benchmark: Benchmark,
    pub runner: CellRunner,
    pub temperature: f64,
    pub run_index: u32,
}

impl Cell {
    /// Stable identifier used for resume bookkeeping and transcript ids.
    pub fn key(&self) -> String {
        format!(
            "{}|{}|{}|{}",
            self.benchmark.as_str(),
            self.runner.name(),
            self.temperature,
            self.run_index
        )
    }
}
