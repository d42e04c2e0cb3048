//! Chain architecture: one query to gather tool calls, one to answer.

use crate::bench::{Benchmark, BenchmarkItem, ToolTally};
use crate::codec::{ask_with_tolerance, AskError, TemplateStore};
use crate::gateway::{ChatMessage, CompletionRequest, GatewayError, ModelReply, Session};
use crate::seed;
use crate::strategy::{answer_spec_for, control_prompt_for, control_template_id, StrategyOutcome};
use crate::tools::ToolRegistry;

use super::config::{bind_registry, AgentConfig, AgentError};
use super::trace::{tally, AgentStep, AgentTrace};

/// The question as the final query restates it; multiple-choice items carry
/// their options along.
pub(super) fn question_block(item: &BenchmarkItem) -> String {
    match item.benchmark {
        Benchmark::Mmlu => format!("{}\n\nOptions:\n{}", item.question, item.options_block()),
        _ => item.question.clone(),
    }
}

/// Appends the benchmark's answer-format instructions to a prompt built
/// from a format-free template.
pub(super) fn with_answer_format(
    store: &TemplateStore,
    item: &BenchmarkItem,
    mut prompt: String,
) -> Result<String, AgentError> {
    let suffix = &store.get(control_template_id(item.benchmark))?.format_suffix;
    if !suffix.is_empty() {
        prompt.push_str("\n\n");
        prompt.push_str(suffix);
    }
    Ok(prompt)
}

pub fn run_chain(
    session: &Session<'_>,
    store: &TemplateStore,
    item: &BenchmarkItem,
    cfg: &AgentConfig,
    registry: &ToolRegistry,
    seed: u64,
) -> Result<AgentTrace, AgentError> {
    let specs = bind_registry(cfg, registry)?;
    let system = store.render("react_system", &[])?;
    let mut steps = Vec::new();
    let mut stats = ToolTally::new();

    let first = CompletionRequest::new(
        vec![ChatMessage::system(&system), ChatMessage::user(control_prompt_for(store, item)?)],
        cfg.temperature,
    )
    .with_seed(seed::child_seed(seed, 0));

    let mut outputs: Vec<String> = Vec::new();
    match session.complete_with_tools(&first, &specs) {
        Ok(ModelReply::ToolCalls(calls)) => {
            for call in calls {
                let result = registry.invoke(&call);
                tally(&mut stats, &call.name, result.ok);
                outputs.push(format!("[{}] {}", call.name, result.content));
                steps.push(AgentStep::action(call, result.content));
            }
        }
        Ok(ModelReply::Text(text)) => steps.push(AgentStep::thought(text)),
        Err(GatewayError::ToolCallParseFailure(detail)) => {
            steps.push(AgentStep::thought(format!("tool-call parse failure: {detail}")));
        }
        Err(e) => return Err(e.into()),
    }

    let tool_outputs =
        if outputs.is_empty() { "(no tool calls were made)".to_string() } else { outputs.join("\n") };
    let final_prompt = with_answer_format(
        store,
        item,
        store.render(
            "chain_final",
            &[("question", &question_block(item)), ("tool_outputs", &tool_outputs)],
        )?,
    )?;
    let final_request = CompletionRequest::new(
        vec![ChatMessage::system(&system), ChatMessage::user(final_prompt)],
        cfg.temperature,
    )
    .with_seed(seed::child_seed(seed, 1));

    let final_answer = match ask_with_tolerance(session, &final_request, &answer_spec_for(item)) {
        Ok(ask) => StrategyOutcome::answered(ask.answer),
        Err(AskError::ToleranceExceeded { .. }) => StrategyOutcome::Invalid,
        Err(AskError::Gateway(e)) => return Err(e.into()),
    };

    Ok(AgentTrace { steps, final_answer, tool_stats: stats, prompt_count: session.prompt_count() })
}
