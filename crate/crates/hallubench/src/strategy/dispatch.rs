//! Strategy dispatcher: validates the strategy/benchmark pairing, injects
//! external clients, and routes to the matching implementation.

use std::sync::Arc;

use thiserror::Error;

use crate::bench::{Benchmark, BenchmarkItem};
use crate::codec::{TemplateError, TemplateStore};
use crate::gateway::{GatewayError, Session};
use crate::tools::{KnowledgeGraph, SearchSource};

use super::common::QueryCtx;
use super::config::{StrategyConfig, StrategyName};
use super::outcome::StrategyResult;
use super::{cove, ddga, kgr, mad, reflection, sampled, simple, tot};

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("strategy {strategy} does not run on {benchmark}")]
    BenchmarkMismatch { strategy: StrategyName, benchmark: Benchmark },
    #[error("strategy {strategy} needs a configured {dependency} client")]
    MissingDependency { strategy: StrategyName, dependency: &'static str },
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

/// External clients some strategies require; plain prompting strategies
/// ignore them.
#[derive(Clone, Default)]
pub struct StrategyDeps {
    pub kg: Option<Arc<dyn KnowledgeGraph>>,
    pub search: Option<Arc<dyn SearchSource>>,
}

impl StrategyDeps {
    pub fn none() -> Self {
        StrategyDeps::default()
    }
}

pub fn run_strategy(
    session: &Session<'_>,
    store: &TemplateStore,
    cfg: &StrategyConfig,
    item: &BenchmarkItem,
    seed: u64,
    deps: &StrategyDeps,
) -> Result<StrategyResult, StrategyError> {
    if !cfg.name.supports(item.benchmark) {
        return Err(StrategyError::BenchmarkMismatch {
            strategy: cfg.name,
            benchmark: item.benchmark,
        });
    }
    let ctx = QueryCtx { session, store, item, cfg, seed };
    match cfg.name {
        StrategyName::Control => simple::run_control(&ctx),
        StrategyName::Cot => simple::run_cot(&ctx),
        StrategyName::Sc => sampled::run_sc(&ctx),
        StrategyName::ScCot => sampled::run_sc_cot(&ctx),
        StrategyName::Tot => tot::run_tot(&ctx),
        StrategyName::Mad => mad::run_mad(&ctx),
        StrategyName::Reflection => reflection::run_reflection(&ctx),
        StrategyName::Cp => sampled::run_cp(&ctx),
        StrategyName::Cove1 => cove::run_cove1(&ctx),
        StrategyName::Cove2 => cove::run_cove2(&ctx),
        StrategyName::Kgr => {
            let kg = deps.kg.as_deref().ok_or(StrategyError::MissingDependency {
                strategy: cfg.name,
                dependency: "knowledge-graph",
            })?;
            kgr::run_kgr(&ctx, kg)
        }
        StrategyName::Ddga => {
            let search = deps.search.as_deref().ok_or(StrategyError::MissingDependency {
                strategy: cfg.name,
                dependency: "web-search",
            })?;
            ddga::run_ddga(&ctx, search)
        }
    }
}
