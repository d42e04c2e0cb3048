//! Sample several reasoning paths, then one vote prompt picks the best.

use super::common::{try_ask, QueryCtx};
use super::dispatch::StrategyError;
use super::outcome::{SampleOutcome, StrategyOutcome, StrategyResult};
use super::sampled::sample_full;
use crate::codec::ParseSpec;

pub fn run_tot(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let prompt = ctx.render("gsm8k_cot", &[("question", &ctx.item.question)])?;
    let drawn = sample_full(ctx, &prompt, &ctx.reasoning_spec())?;
    let samples: Vec<SampleOutcome> =
        drawn.iter().map(|s| s.as_ref().map(|ok| ok.answer.clone()).map_err(Clone::clone)).collect();

    // Paths that parsed, keeping their raw text for the vote listing.
    let paths: Vec<_> = drawn.iter().filter_map(|s| s.as_ref().ok()).collect();
    let outcome = match paths.len() {
        0 => StrategyOutcome::Invalid,
        // A lone surviving path has nothing to be voted against.
        1 => StrategyOutcome::answered(paths[0].answer.clone()),
        count => {
            let listing = paths
                .iter()
                .enumerate()
                .map(|(i, path)| format!("Option {}:\n{}", i + 1, path.raw))
                .collect::<Vec<_>>()
                .join("\n\n");
            let vote_prompt = ctx.render(
                "tot_vote",
                &[("question", &ctx.item.question), ("reasoning_paths", &listing)],
            )?;
            let labels: Vec<String> = (1..=count).map(|i| i.to_string()).collect();
            let spec = ParseSpec::choice(labels).with_tolerance(ctx.cfg.tolerance);
            match try_ask(ctx, &ctx.request(vote_prompt, ctx.cfg.sample_count as u64), &spec)? {
                Some(vote) => {
                    let chosen: usize = vote.answer.canonical().parse().expect("label is an index");
                    StrategyOutcome::answered(paths[chosen - 1].answer.clone())
                }
                None => StrategyOutcome::Invalid,
            }
        }
    };
    Ok(ctx.finish(outcome, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::Benchmark;
    use crate::strategy::testutil::{ctx_gateway, scripted, scripted_rules};

    fn run(gateway: &crate::gateway::Gateway) -> StrategyResult {
        let (store, item, cfg) = ctx_gateway(Benchmark::Gsm8k, "tot");
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        run_tot(&ctx).unwrap()
    }

    #[test]
    fn clean_run_is_six_prompts_and_vote_selects_path() {
        let gateway = scripted_rules(
            &[
                ("vote which of the following", vec!["FINAL ANSWER: 3"]),
                (
                    "",
                    vec![
                        "STEP 1: a\nFINAL ANSWER: 11",
                        "STEP 1: b\nFINAL ANSWER: 22",
                        "STEP 1: c\nFINAL ANSWER: 33",
                        "STEP 1: d\nFINAL ANSWER: 44",
                        "STEP 1: e\nFINAL ANSWER: 55",
                    ],
                ),
            ],
            "unused",
        );
        let result = run(&gateway);
        assert_eq!(result.prompt_count, 6);
        assert_eq!(result.samples.len(), 5);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "33");
    }

    #[test]
    fn vote_prompt_lists_numbered_paths() {
        let gateway = scripted_rules(
            &[
                ("vote which of the following", vec!["FINAL ANSWER: 1"]),
                ("", vec!["STEP 1: x\nFINAL ANSWER: 5"]),
            ],
            "unused",
        );
        let result = run(&gateway);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "5");
        let lines = gateway.transcript().lines();
        let vote_entry = lines
            .iter()
            .find(|l| l["request"]["messages"][0]["content"]
                .as_str()
                .unwrap()
                .contains("vote which"))
            .expect("vote prompt recorded");
        let prompt = vote_entry["request"]["messages"][0]["content"].as_str().unwrap();
        assert!(prompt.contains("Option 1:"));
        assert!(prompt.contains("Option 5:"));
    }

    #[test]
    fn out_of_range_vote_retries_then_invalid() {
        let gateway = scripted_rules(
            &[
                ("vote which of the following", vec!["FINAL ANSWER: 9"]),
                ("", vec!["STEP 1: x\nFINAL ANSWER: 5", "STEP 1: y\nFINAL ANSWER: 6"]),
            ],
            "unused",
        );
        let result = run(&gateway);
        assert_eq!(result.outcome, StrategyOutcome::Invalid);
        // 5 samples + 4 vote attempts.
        assert_eq!(result.prompt_count, 9);
    }

    #[test]
    fn single_parsed_path_skips_the_vote() {
        let gateway = scripted(&[
            "STEP 1: x\nFINAL ANSWER: 5",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
            "junk",
        ]);
        let result = run(&gateway);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "5");
        // 1 clean + 4×4 failed attempts, no vote prompt.
        assert_eq!(result.prompt_count, 17);
    }

    #[test]
    fn all_paths_failing_is_invalid() {
        let gateway = scripted(&["junk"]);
        let result = run(&gateway);
        assert_eq!(result.outcome, StrategyOutcome::Invalid);
        assert_eq!(result.samples.iter().filter(|s| s.is_err()).count(), 5);
    }
}
