//! Tool-calling agent architectures with per-step trace capture.

pub mod chain;
pub mod config;
pub mod react;
pub mod trace;

pub use chain::run_chain;
pub use config::{bind_registry, AgentConfig, AgentError, Architecture, DEFAULT_MAX_STEPS};
pub use react::run_react;
pub use trace::{tally, AgentStep, AgentTrace, TraceRecord};

use crate::bench::BenchmarkItem;
use crate::codec::TemplateStore;
use crate::gateway::Session;
use crate::tools::ToolRegistry;

/// Runs the configured architecture against one benchmark item.
pub fn run_agent(
    session: &Session<'_>,
    store: &TemplateStore,
    item: &BenchmarkItem,
    cfg: &AgentConfig,
    registry: &ToolRegistry,
    seed: u64,
) -> Result<AgentTrace, AgentError> {
    if !cfg.architecture.supports(item.benchmark) {
        return Err(AgentError::BenchmarkMismatch {
            architecture: cfg.architecture,
            benchmark: item.benchmark,
        });
    }
    match cfg.architecture {
        Architecture::Chain => run_chain(session, store, item, cfg, registry, seed),
        Architecture::React | Architecture::ReactDdg => {
            run_react(session, store, item, cfg, registry, seed)
        }
    }
}
