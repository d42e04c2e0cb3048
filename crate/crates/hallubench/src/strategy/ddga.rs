//! Augment the question with live search snippets before answering.

use crate::tools::{snippet_block, SearchSource};

use super::common::{try_ask, QueryCtx};
use super::dispatch::StrategyError;
use super::outcome::{StrategyOutcome, StrategyResult};

pub fn run_ddga(
    ctx: &QueryCtx<'_>,
    search: &dyn SearchSource,
) -> Result<StrategyResult, StrategyError> {
    let prompt = match search.search(&ctx.item.question) {
        Ok(hits) => {
            let block = snippet_block(&hits);
            let results = if block.is_empty() { "(no results)".to_string() } else { block };
            ctx.render(
                "ddga",
                &[("question", &ctx.item.question), ("search_results", &results)],
            )?
        }
        // Search is down: answer from the bare question instead of failing.
        Err(fault) => {
            ctx.session.note(&format!("search degraded to plain prompt: {}", fault.describe()));
            ctx.control_prompt()?
        }
    };
    let outcome = match try_ask(ctx, &ctx.request(prompt, 0), &ctx.answer_spec())? {
        Some(ask) => StrategyOutcome::answered(ask.answer),
        None => StrategyOutcome::Invalid,
    };
    Ok(ctx.finish(outcome, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::Benchmark;
    use crate::strategy::testutil::{ctx_gateway, scripted_rules};
    use crate::tools::{FixtureSearch, ToolFault};

    fn run(gateway: &crate::gateway::Gateway, search: &dyn SearchSource) -> StrategyResult {
        let (store, item, cfg) = ctx_gateway(Benchmark::Triviaqa, "ddga");
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        run_ddga(&ctx, search).unwrap()
    }

    #[test]
    fn one_prompt_with_snippets_injected() {
        let gateway = scripted_rules(
            &[("from a google search", vec!["FINAL ANSWER: Kelp"])],
            "unused",
        );
        let search = FixtureSearch::with_defaults();
        let result = run(&gateway, &search);
        assert_eq!(result.prompt_count, 1);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "Kelp");
        let lines = gateway.transcript().lines();
        let prompt = lines[0]["request"]["messages"][0]["content"].as_str().unwrap();
        assert!(prompt.contains("Kelp"), "snippet text injected: {prompt}");
    }

    #[test]
    fn search_fault_degrades_to_plain_prompt_with_note() {
        let gateway = scripted_rules(
            &[
                ("from a google search", vec!["FINAL ANSWER: wrong path"]),
                ("trivia question", vec!["FINAL ANSWER: Kelp"]),
            ],
            "unused",
        );
        let search = FixtureSearch::with_defaults();
        search.set_fault(Some(ToolFault::Timeout));
        let result = run(&gateway, &search);
        assert_eq!(result.prompt_count, 1);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "Kelp");
        let notes: Vec<String> = gateway
            .transcript()
            .lines()
            .iter()
            .filter_map(|l| l["note"].as_str().map(String::from))
            .collect();
        assert!(notes.iter().any(|n| n.contains("degraded")));
    }

    #[test]
    fn empty_results_still_one_prompt() {
        let gateway = scripted_rules(
            &[("from a google search", vec!["FINAL ANSWER: Kelp"])],
            "unused",
        );
        let search = FixtureSearch::new();
        let result = run(&gateway, &search);
        assert_eq!(result.prompt_count, 1);
        let lines = gateway.transcript().lines();
        let prompt = lines[0]["request"]["messages"][0]["content"].as_str().unwrap();
        assert!(prompt.contains("(no results)"));
    }
}
