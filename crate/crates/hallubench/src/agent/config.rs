//! Agent architecture configuration and tool binding.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::Benchmark;
use crate::codec::TemplateError;
use crate::gateway::GatewayError;
use crate::tools::{ToolRegistry, ToolSpec};

pub const DEFAULT_MAX_STEPS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    /// Two queries: gather tool calls, then answer with their outputs.
    Chain,
    /// Thought → action → observation loop until a plain text answer.
    React,
    /// ReAct restricted to the web-search tool.
    ReactDdg,
}

impl Architecture {
    pub const ALL: [Architecture; 3] = [Architecture::Chain, Architecture::React, Architecture::ReactDdg];

    pub fn as_str(&self) -> &'static str {
        match self {
            Architecture::Chain => "chain",
            Architecture::React => "react",
            Architecture::ReactDdg => "react_ddg",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.as_str() == text)
    }

    /// Which benchmarks this architecture runs on.
    pub fn supports(&self, benchmark: Benchmark) -> bool {
        match self {
            Architecture::Chain | Architecture::React => true,
            Architecture::ReactDdg => benchmark == Benchmark::Triviaqa,
        }
    }

    /// The tools an architecture uses when the config names none.
    pub fn default_tools(&self) -> BTreeSet<String> {
        let names: &[&str] = match self {
            Architecture::ReactDdg => &["web_search"],
            _ => &["wikipedia_lookup", "web_search", "exec_code"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
pub enum AgentError {
    #[error("agent config names a tool missing from the registry: '{name}'")]
    UnknownToolConfigured { name: String },
    #[error("bad agent config: {0}")]
    BadConfig(String),
    #[error("architecture {architecture} does not run on benchmark {benchmark}")]
    BenchmarkMismatch { architecture: Architecture, benchmark: Benchmark },
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

fn default_max_steps() -> u32 {
    DEFAULT_MAX_STEPS
}

fn default_temperature() -> f64 {
    0.2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub architecture: Architecture,
    /// Empty means the architecture's default set.
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub tool_names: BTreeSet<String>,
    #[serde(default = "default_max_steps")]
    pub max_steps: u32,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
}

impl AgentConfig {
    pub fn new(architecture: Architecture) -> Self {
        AgentConfig {
            architecture,
            tool_names: BTreeSet::new(),
            max_steps: DEFAULT_MAX_STEPS,
            temperature: default_temperature(),
        }
    }

    pub fn at_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    /// The tool set actually bound: the configured names, or the
    /// architecture's defaults when none were given.
    pub fn tools(&self) -> BTreeSet<String> {
        if self.tool_names.is_empty() {
            self.architecture.default_tools()
        } else {
            self.tool_names.clone()
        }
    }

    pub fn validate(&self) -> Result<(), AgentError> {
        if self.max_steps == 0 {
            return Err(AgentError::BadConfig("max_steps must be at least 1".into()));
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(AgentError::BadConfig(format!(
                "temperature {} outside [0, 2]",
                self.temperature
            )));
        }
        if self.architecture == Architecture::ReactDdg && self.tools() != Architecture::ReactDdg.default_tools() {
            return Err(AgentError::BadConfig(
                "react_ddg is limited to the web_search tool".into(),
            ));
        }
        Ok(())
    }
}

/// Resolves the config's tool set against the registry, producing the specs
/// serialized into every tool-enabled request. Names are bound in sorted
/// order so request bodies are stable.
pub fn bind_registry(cfg: &AgentConfig, registry: &ToolRegistry) -> Result<Vec<ToolSpec>, AgentError> {
    cfg.validate()?;
    let names: Vec<String> = cfg.tools().into_iter().collect();
    registry
        .specs_for(&names)
        .map_err(|name| AgentError::UnknownToolConfigured { name })
}
