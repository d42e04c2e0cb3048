//! Shared plumbing for strategy implementations: per-query context,
//! benchmark-specific parse specs and control templates, and the
//! tolerance-exceeded → Invalid mapping.

use crate::bench::{Benchmark, BenchmarkItem};
use crate::codec::{
    ask_with_tolerance, AskError, AskOutcome, ParseSpec, TemplateError, TemplateStore,
};
use crate::gateway::{ChatMessage, CompletionRequest, Session};
use crate::seed;

use super::config::StrategyConfig;
use super::dispatch::StrategyError;
use super::outcome::{SampleOutcome, StrategyOutcome, StrategyResult};

/// The plain question template for a benchmark.
pub fn control_template_id(benchmark: Benchmark) -> &'static str {
    match benchmark {
        Benchmark::Gsm8k => "gsm8k_control",
        Benchmark::Triviaqa => "triviaqa_control",
        Benchmark::Mmlu => "mmlu_control",
    }
}

/// Renders the benchmark's plain formatted question prompt.
pub fn control_prompt_for(
    store: &TemplateStore,
    item: &BenchmarkItem,
) -> Result<String, TemplateError> {
    let id = control_template_id(item.benchmark);
    match item.benchmark {
        Benchmark::Mmlu => store.render(
            id,
            &[("question", &item.question), ("options", &item.options_block())],
        ),
        _ => store.render(id, &[("question", &item.question)]),
    }
}

/// The answer format expected from this item's benchmark, at the default
/// re-ask tolerance.
pub fn answer_spec_for(item: &BenchmarkItem) -> ParseSpec {
    match item.benchmark {
        Benchmark::Gsm8k => ParseSpec::numeric(),
        Benchmark::Triviaqa => ParseSpec::freetext(),
        Benchmark::Mmlu => ParseSpec::choice(item.option_labels()),
    }
}

/// One strategy invocation: the query, its config, the session all prompts
/// flow through, and the per-query base seed every draw derives from.
pub struct QueryCtx<'a> {
    pub session: &'a Session<'a>,
    pub store: &'a TemplateStore,
    pub item: &'a BenchmarkItem,
    pub cfg: &'a StrategyConfig,
    pub seed: u64,
}

impl QueryCtx<'_> {
    /// Single-user-message request at the configured temperature.
    pub fn request(&self, prompt: impl Into<String>, salt: u64) -> CompletionRequest {
        CompletionRequest::new(vec![ChatMessage::user(prompt)], self.cfg.temperature)
            .with_seed(seed::child_seed(self.seed, salt))
    }

    /// The benchmark's answer format at the configured tolerance.
    pub fn answer_spec(&self) -> ParseSpec {
        answer_spec_for(self.item).with_tolerance(self.cfg.tolerance)
    }

    /// Step-formatted reasoning plus the numeric answer (GSM8K CoT paths).
    pub fn reasoning_spec(&self) -> ParseSpec {
        ParseSpec::reasoning_numeric().with_tolerance(self.cfg.tolerance)
    }

    pub fn yes_no_spec(&self) -> ParseSpec {
        ParseSpec::choice(["YES", "NO"]).with_tolerance(self.cfg.tolerance)
    }

    pub fn render(&self, template_id: &str, bindings: &[(&str, &str)]) -> Result<String, StrategyError> {
        Ok(self.store.render(template_id, bindings)?)
    }

    /// The benchmark's plain formatted question prompt.
    pub fn control_prompt(&self) -> Result<String, StrategyError> {
        Ok(control_prompt_for(self.store, self.item)?)
    }

    /// Wraps an outcome with the session's final call count; `samples` stays
    /// empty for non-sampling strategies.
    pub fn finish(&self, outcome: StrategyOutcome, samples: Vec<SampleOutcome>) -> StrategyResult {
        StrategyResult {
            outcome,
            prompt_count: self.session.prompt_count(),
            samples,
            transcript_id: self.session.transcript_id().to_string(),
        }
    }
}

/// Collapses the tolerance loop's terminal failure into `None` (the caller
/// turns it into an Invalid outcome); gateway faults propagate.
pub fn ask_or_invalid(
    result: Result<AskOutcome, AskError>,
) -> Result<Option<AskOutcome>, StrategyError> {
    match result {
        Ok(outcome) => Ok(Some(outcome)),
        Err(AskError::ToleranceExceeded { .. }) => Ok(None),
        Err(AskError::Gateway(e)) => Err(e.into()),
    }
}

/// One tolerant ask of `request`, already mapped per `ask_or_invalid`.
pub fn try_ask(
    ctx: &QueryCtx<'_>,
    request: &CompletionRequest,
    spec: &ParseSpec,
) -> Result<Option<AskOutcome>, StrategyError> {
    ask_or_invalid(ask_with_tolerance(ctx.session, request, spec))
}
