//! Sampling strategies: repeated draws with a majority vote (plain and
//! step-formatted) and the unanimity gate that abstains on contradiction.

use crate::codec::{ask_with_tolerance, AskError, AskOutcome, ParseSpec};

use super::common::QueryCtx;
use super::dispatch::StrategyError;
use super::outcome::{AbstainReason, SampleOutcome, StrategyOutcome, StrategyResult};
use super::vote::majority_vote;

/// Draws `cfg.sample_count` independent completions of the same prompt.
/// Sample `k` seeds its tolerance loop from the query seed salted with `k`,
/// so draws are order-independent and resumable. Per-sample parse failures
/// are recorded in place, never fatal.
pub fn sample_full(
    ctx: &QueryCtx<'_>,
    prompt: &str,
    spec: &ParseSpec,
) -> Result<Vec<Result<AskOutcome, String>>, StrategyError> {
    let mut samples = Vec::with_capacity(ctx.cfg.sample_count);
    for k in 0..ctx.cfg.sample_count {
        let request = ctx.request(prompt, k as u64);
        match ask_with_tolerance(ctx.session, &request, spec) {
            Ok(outcome) => samples.push(Ok(outcome)),
            Err(AskError::ToleranceExceeded { last_failure, .. }) => {
                samples.push(Err(last_failure.to_string()))
            }
            Err(AskError::Gateway(e)) => return Err(e.into()),
        }
    }
    Ok(samples)
}

pub fn sample_n(
    ctx: &QueryCtx<'_>,
    prompt: &str,
    spec: &ParseSpec,
) -> Result<Vec<SampleOutcome>, StrategyError> {
    Ok(sample_full(ctx, prompt, spec)?
        .into_iter()
        .map(|sample| sample.map(|ok| ok.answer))
        .collect())
}

fn vote_over(ctx: &QueryCtx<'_>, samples: Vec<SampleOutcome>) -> StrategyResult {
    let ballot: Vec<_> = samples.iter().filter_map(|s| s.as_ref().ok().cloned()).collect();
    let outcome = match majority_vote(&ballot) {
        Ok(winner) => StrategyOutcome::answered(winner),
        Err(_) => StrategyOutcome::Invalid,
    };
    ctx.finish(outcome, samples)
}

pub fn run_sc(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let prompt = ctx.control_prompt()?;
    let samples = sample_n(ctx, &prompt, &ctx.answer_spec())?;
    Ok(vote_over(ctx, samples))
}

pub fn run_sc_cot(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let prompt = ctx.render("gsm8k_cot", &[("question", &ctx.item.question)])?;
    let samples = sample_n(ctx, &prompt, &ctx.reasoning_spec())?;
    Ok(vote_over(ctx, samples))
}

/// Answers only when every parsed sample agrees; any contradiction abstains.
pub fn run_cp(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let prompt = ctx.control_prompt()?;
    let samples = sample_n(ctx, &prompt, &ctx.answer_spec())?;
    let parsed: Vec<_> = samples.iter().filter_map(|s| s.as_ref().ok()).collect();
    let outcome = match parsed.first() {
        None => StrategyOutcome::Invalid,
        Some(first) if parsed.iter().all(|a| a.canonical() == first.canonical()) => {
            StrategyOutcome::answered((*first).clone())
        }
        Some(_) => StrategyOutcome::abstained(AbstainReason::Contradiction),
    };
    Ok(ctx.finish(outcome, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::Benchmark;
    use crate::strategy::testutil::{ctx_gateway, scripted};

    fn run_with<'a>(
        responses: &[&str],
        benchmark: Benchmark,
        strategy: &str,
        run: impl Fn(&QueryCtx<'_>) -> Result<StrategyResult, StrategyError>,
    ) -> StrategyResult {
        let gateway = scripted(responses);
        let (store, item, cfg) = ctx_gateway(benchmark, strategy);
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        run(&ctx).unwrap()
    }

    #[test]
    fn sc_votes_over_five_samples() {
        let result = run_with(
            &[
                "FINAL ANSWER: 8",
                "FINAL ANSWER: 8",
                "FINAL ANSWER: 9",
                "FINAL ANSWER: 8",
                "FINAL ANSWER: 9",
            ],
            Benchmark::Gsm8k,
            "sc",
            run_sc,
        );
        assert_eq!(result.prompt_count, 5);
        assert_eq!(result.samples.len(), 5);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "8");
    }

    #[test]
    fn sc_failed_samples_are_recorded_not_fatal() {
        let result = run_with(
            &[
                "FINAL ANSWER: 8",
                "junk",
                "junk",
                "junk",
                "junk", // sample 2 exhausts tolerance (4 attempts)
                "FINAL ANSWER: 9",
                "FINAL ANSWER: 8",
                "FINAL ANSWER: 8",
            ],
            Benchmark::Gsm8k,
            "sc",
            run_sc,
        );
        assert_eq!(result.samples.iter().filter(|s| s.is_err()).count(), 1);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "8");
        // 4 failed attempts for the bad sample + 4 clean ones.
        assert_eq!(result.prompt_count, 8);
    }

    #[test]
    fn sc_all_failures_is_invalid() {
        let result = run_with(&["junk"], Benchmark::Gsm8k, "sc", run_sc);
        assert_eq!(result.outcome, StrategyOutcome::Invalid);
        assert_eq!(result.samples.iter().filter(|s| s.is_err()).count(), 5);
    }

    #[test]
    fn sc_cot_requires_steps_in_every_sample() {
        let result = run_with(
            &["STEP 1: compute\nFINAL ANSWER: 4"],
            Benchmark::Gsm8k,
            "sc_cot",
            run_sc_cot,
        );
        assert_eq!(result.prompt_count, 5);
        let answer = result.outcome.answer().unwrap();
        assert_eq!(answer.canonical(), "4");
        assert_eq!(answer.reasoning_steps, vec!["compute".to_string()]);
    }

    #[test]
    fn cp_unanimous_answers() {
        let result =
            run_with(&["FINAL ANSWER: Paris"], Benchmark::Triviaqa, "cp", run_cp);
        assert_eq!(result.prompt_count, 5);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "Paris");
    }

    #[test]
    fn cp_contradiction_abstains() {
        let result = run_with(
            &[
                "FINAL ANSWER: Paris",
                "FINAL ANSWER: Lyon",
                "FINAL ANSWER: Paris",
                "FINAL ANSWER: Paris",
                "FINAL ANSWER: Paris",
            ],
            Benchmark::Triviaqa,
            "cp",
            run_cp,
        );
        assert_eq!(
            result.outcome,
            StrategyOutcome::Abstained { reason: AbstainReason::Contradiction }
        );
        assert_eq!(result.prompt_count, 5);
    }

    #[test]
    fn cp_all_unparsed_is_invalid() {
        let result = run_with(&["???"], Benchmark::Triviaqa, "cp", run_cp);
        assert_eq!(result.outcome, StrategyOutcome::Invalid);
    }
}
