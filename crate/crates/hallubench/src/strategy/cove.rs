//! Verification pipelines: check an initial answer against an independently
//! produced one and abstain when they clash.

use super::common::{try_ask, QueryCtx};
use super::dispatch::StrategyError;
use super::outcome::{AbstainReason, StrategyOutcome, StrategyResult};

/// Free-text variant: statement → generated verification question →
/// independent answer (fresh context) → contradiction check → formatted
/// final answer unless contradicted.
pub fn run_cove1(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let question = ctx.item.question.as_str();

    let initial_prompt = ctx.render("cove1_initial", &[("question", question)])?;
    let initial = ctx.session.complete(&ctx.request(initial_prompt, 0))?.content;

    let genq_prompt = ctx.render("cove1_genq", &[("initial_solution", &initial)])?;
    let verification_question =
        ctx.session.complete(&ctx.request(genq_prompt, 1))?.content.trim().to_string();

    // Answered in a fresh context: the generated question is the whole prompt.
    let verification_answer =
        ctx.session.complete(&ctx.request(verification_question.clone(), 2))?.content;

    let check_prompt = ctx.render(
        "cove1_check",
        &[
            ("question", question),
            ("initial_solution", &initial),
            ("verification_question", &verification_question),
            ("verification_answer", &verification_answer),
        ],
    )?;
    let contradicted = match try_ask(ctx, &ctx.request(check_prompt, 3), &ctx.yes_no_spec())? {
        Some(ask) => ask.answer.canonical().eq_ignore_ascii_case("YES"),
        None => return Ok(ctx.finish(StrategyOutcome::Invalid, Vec::new())),
    };
    if contradicted {
        return Ok(ctx.finish(
            StrategyOutcome::abstained(AbstainReason::VerificationFailed),
            Vec::new(),
        ));
    }

    let final_prompt = ctx.control_prompt()?;
    let outcome = match try_ask(ctx, &ctx.request(final_prompt, 4), &ctx.answer_spec())? {
        Some(ask) => StrategyOutcome::answered(ask.answer),
        None => StrategyOutcome::Invalid,
    };
    Ok(ctx.finish(outcome, Vec::new()))
}

/// Multiple-choice variant: formatted choice → open-ended answer with the
/// options withheld → match check → confirmation prompt when they agree,
/// abstention when they do not.
pub fn run_cove2(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let question = ctx.item.question.as_str();
    let options = ctx.item.options_block();

    let initial_prompt = ctx.control_prompt()?;
    let chosen = match try_ask(ctx, &ctx.request(initial_prompt.clone(), 0), &ctx.answer_spec())? {
        Some(ask) => ask.answer,
        None => return Ok(ctx.finish(StrategyOutcome::Invalid, Vec::new())),
    };

    let open_prompt = ctx.render("cove2_open", &[("question", question)])?;
    let independent = ctx.session.complete(&ctx.request(open_prompt, 1))?.content;

    let check_prompt = ctx.render(
        "cove2_check",
        &[
            ("question", question),
            ("options", &options),
            ("chosen_option", chosen.canonical()),
            ("independent_solution", &independent),
        ],
    )?;
    let matched = match try_ask(ctx, &ctx.request(check_prompt, 2), &ctx.yes_no_spec())? {
        Some(ask) => ask.answer.canonical().eq_ignore_ascii_case("YES"),
        None => return Ok(ctx.finish(StrategyOutcome::Invalid, Vec::new())),
    };
    if !matched {
        return Ok(ctx.finish(
            StrategyOutcome::abstained(AbstainReason::VerificationFailed),
            Vec::new(),
        ));
    }

    // Confirmation keeps the original choice regardless of this reply.
    ctx.session.complete(&ctx.request(initial_prompt, 3))?;
    Ok(ctx.finish(StrategyOutcome::answered(chosen), Vec::new()))
}
