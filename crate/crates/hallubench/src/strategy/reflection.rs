//! Answer, receive a graded critique, then revise: three prompts, with the
//! final answer parsed from the revision.

use super::common::{try_ask, QueryCtx};
use super::dispatch::StrategyError;
use super::outcome::{StrategyOutcome, StrategyResult};

pub fn run_reflection(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let question = ctx.item.question.as_str();
    let options = ctx.item.options_block();

    let initial_prompt =
        ctx.render("reflect_initial", &[("question", question), ("options", &options)])?;
    let initial = ctx.session.complete(&ctx.request(initial_prompt, 0))?.content;

    let critique_prompt = ctx.render(
        "reflect_critique",
        &[("question", question), ("options", &options), ("initial_solution", &initial)],
    )?;
    let feedback = ctx.session.complete(&ctx.request(critique_prompt, 1))?.content;

    let revise_prompt = ctx.render(
        "reflect_revise",
        &[
            ("question", question),
            ("options", &options),
            ("initial_response", &initial),
            ("feedback", &feedback),
        ],
    )?;
    let outcome = match try_ask(ctx, &ctx.request(revise_prompt, 2), &ctx.answer_spec())? {
        Some(ask) => StrategyOutcome::answered(ask.answer),
        None => StrategyOutcome::Invalid,
    };
    Ok(ctx.finish(outcome, Vec::new()))
}
