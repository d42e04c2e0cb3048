//! Prompting strategies: twelve pipelines from a single formatted ask to
//! debate, verification, and retrieval-grounded variants, all with exact
//! prompt-cost accounting.

pub mod common;
pub mod config;
pub mod cove;
pub mod ddga;
pub mod dispatch;
pub mod kgr;
pub mod mad;
pub mod outcome;
pub mod reflection;
pub mod sampled;
pub mod simple;
#[cfg(test)]
pub mod testutil;
pub mod tot;
pub mod vote;

pub use common::{answer_spec_for, control_prompt_for, control_template_id, QueryCtx};
pub use config::{StrategyConfig, StrategyName};
pub use dispatch::{run_strategy, StrategyDeps, StrategyError};
pub use outcome::{AbstainReason, SampleOutcome, StrategyOutcome, StrategyResult};
pub use vote::{majority_vote, VoteError};
