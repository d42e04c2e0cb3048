//! Single-prompt strategies: the plain formatted ask and its
//! step-by-step variant.

use super::common::{try_ask, QueryCtx};
use super::dispatch::StrategyError;
use super::outcome::{StrategyOutcome, StrategyResult};

pub fn run_control(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let prompt = ctx.control_prompt()?;
    let outcome = match try_ask(ctx, &ctx.request(prompt, 0), &ctx.answer_spec())? {
        Some(ask) => StrategyOutcome::answered(ask.answer),
        None => StrategyOutcome::Invalid,
    };
    Ok(ctx.finish(outcome, Vec::new()))
}

/// Same single ask, but the reply must carry STEP-formatted reasoning; the
/// steps ride along inside the parsed answer.
pub fn run_cot(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let prompt = ctx.render("gsm8k_cot", &[("question", &ctx.item.question)])?;
    let outcome = match try_ask(ctx, &ctx.request(prompt, 0), &ctx.reasoning_spec())? {
        Some(ask) => StrategyOutcome::answered(ask.answer),
        None => StrategyOutcome::Invalid,
    };
    Ok(ctx.finish(outcome, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::testutil::{ctx_gateway, scripted};

    #[test]
    fn control_is_one_prompt_on_clean_reply() {
        let gateway = scripted(&["FINAL ANSWER: 72"]);
        let (store, item, cfg) = ctx_gateway(crate::bench::Benchmark::Gsm8k, "control");
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        let result = run_control(&ctx).unwrap();
        assert_eq!(result.prompt_count, 1);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "72");
        assert!(result.samples.is_empty());
    }

    #[test]
    fn control_retries_then_goes_invalid() {
        let gateway = scripted(&["garbage", "also garbage", "more", "still"]);
        let (store, item, cfg) = ctx_gateway(crate::bench::Benchmark::Gsm8k, "control");
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        let result = run_control(&ctx).unwrap();
        assert_eq!(result.outcome, StrategyOutcome::Invalid);
        assert_eq!(result.prompt_count, 4);
    }

    #[test]
    fn control_retry_accounting_counts_attempts() {
        let gateway = scripted(&["garbage", "FINAL ANSWER: 72"]);
        let (store, item, cfg) = ctx_gateway(crate::bench::Benchmark::Gsm8k, "control");
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        let result = run_control(&ctx).unwrap();
        assert_eq!(result.prompt_count, 2);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "72");
    }

    #[test]
    fn cot_retains_reasoning_steps() {
        let gateway = scripted(&["STEP 1: halve it\nSTEP 2: add two\nFINAL ANSWER: 10"]);
        let (store, item, cfg) = ctx_gateway(crate::bench::Benchmark::Gsm8k, "cot");
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        let result = run_cot(&ctx).unwrap();
        let answer = result.outcome.answer().unwrap();
        assert_eq!(answer.canonical(), "10");
        assert_eq!(answer.reasoning_steps.len(), 2);
        assert_eq!(result.prompt_count, 1);
    }

    #[test]
    fn cot_without_steps_is_rejected_until_invalid() {
        let gateway = scripted(&["FINAL ANSWER: 10"]);
        let (store, item, cfg) = ctx_gateway(crate::bench::Benchmark::Gsm8k, "cot");
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        let result = run_cot(&ctx).unwrap();
        assert_eq!(result.outcome, StrategyOutcome::Invalid);
        assert_eq!(result.prompt_count, 4);
    }
}
