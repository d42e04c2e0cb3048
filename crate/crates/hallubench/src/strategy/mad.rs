//! Two-debater exchange: answer independently, swap replies each round,
//! stop on agreement or a round cap; the first debater's answer is final.

use crate::bench::Benchmark;
use crate::codec::{parse, ParsedAnswer};
use crate::gateway::{ChatMessage, CompletionRequest};
use crate::seed;

use super::common::{try_ask, QueryCtx};
use super::dispatch::StrategyError;
use super::outcome::{StrategyOutcome, StrategyResult};

fn templates(benchmark: Benchmark) -> (&'static str, &'static str) {
    match benchmark {
        Benchmark::Gsm8k => ("gsm8k_mad_initial", "gsm8k_mad_iterative"),
        Benchmark::Triviaqa => ("triviaqa_mad_initial", "triviaqa_mad_iterative"),
        Benchmark::Mmlu => ("mmlu_mad_initial", "mmlu_mad_iterative"),
    }
}

struct Debater {
    history: Vec<ChatMessage>,
    answer: Option<ParsedAnswer>,
    latest_raw: String,
}

pub fn run_mad(ctx: &QueryCtx<'_>) -> Result<StrategyResult, StrategyError> {
    let (initial_id, iterative_id) = templates(ctx.item.benchmark);
    let initial_prompt = match ctx.item.benchmark {
        Benchmark::Mmlu => ctx.render(
            initial_id,
            &[("question", &ctx.item.question), ("options", &ctx.item.options_block())],
        )?,
        _ => ctx.render(initial_id, &[("question", &ctx.item.question)])?,
    };

    let spec = ctx.answer_spec();
    let mut debaters =
        [Debater { history: Vec::new(), answer: None, latest_raw: String::new() }, Debater {
            history: Vec::new(),
            answer: None,
            latest_raw: String::new(),
        }];
    let mut call_index = 0u64;

    // Each exchange is single-shot: an unparseable reply simply counts as
    // disagreement and its raw text is what the other debater sees.
    let speak = |debater: &mut Debater, prompt: String, call_index: &mut u64| {
        debater.history.push(ChatMessage::user(prompt));
        let request = CompletionRequest::new(debater.history.clone(), ctx.cfg.temperature)
            .with_seed(seed::child_seed(ctx.seed, *call_index));
        *call_index += 1;
        let response = ctx.session.complete(&request)?;
        debater.history.push(ChatMessage::assistant(&response.content));
        debater.answer = parse(&response.content, &spec).ok();
        debater.latest_raw = response.content;
        Ok::<(), StrategyError>(())
    };

    for round in 0..ctx.cfg.max_debate_rounds {
        if round == 0 {
            for debater in debaters.iter_mut() {
                speak(debater, initial_prompt.clone(), &mut call_index)?;
            }
        } else {
            let exchanged = [debaters[1].latest_raw.clone(), debaters[0].latest_raw.clone()];
            for (debater, other_solution) in debaters.iter_mut().zip(exchanged) {
                let prompt = match ctx.item.benchmark {
                    Benchmark::Gsm8k => ctx.render(
                        iterative_id,
                        &[("question", &ctx.item.question), ("other_solution", &other_solution)],
                    )?,
                    _ => ctx.render(iterative_id, &[("other_solution", &other_solution)])?,
                };
                speak(debater, prompt, &mut call_index)?;
            }
        }
        let agreed = matches!(
            (&debaters[0].answer, &debaters[1].answer),
            (Some(a), Some(b)) if a.canonical() == b.canonical()
        );
        if agreed {
            break;
        }
    }

    let outcome = match debaters[0].answer.take() {
        Some(answer) => StrategyOutcome::answered(answer),
        // The first debater's last reply never parsed; re-ask it with the
        // usual tolerance before giving up.
        None => {
            let mut history = debaters[0].history.clone();
            history.pop();
            let request = CompletionRequest::new(history, ctx.cfg.temperature)
                .with_seed(seed::child_seed(ctx.seed, call_index));
            match try_ask(ctx, &request, &spec)? {
                Some(ask) => StrategyOutcome::answered(ask.answer),
                None => StrategyOutcome::Invalid,
            }
        }
    };
    Ok(ctx.finish(outcome, Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::testutil::{ctx_gateway, scripted, scripted_rules};

    fn run(gateway: &crate::gateway::Gateway, benchmark: Benchmark) -> StrategyResult {
        let (store, item, cfg) = ctx_gateway(benchmark, "mad");
        let session = gateway.session("t");
        let ctx = QueryCtx { session: &session, store: &store, item: &item, cfg: &cfg, seed: 1 };
        run_mad(&ctx).unwrap()
    }

    #[test]
    fn immediate_agreement_costs_two_prompts() {
        let gateway = scripted(&["FINAL ANSWER: 72"]);
        let result = run(&gateway, Benchmark::Gsm8k);
        assert_eq!(result.prompt_count, 2);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "72");
    }

    #[test]
    fn round_one_agreement_costs_four_prompts() {
        // Initial replies disagree; after one exchange both settle on 72.
        let gateway = scripted_rules(
            &[
                ("another agent", vec!["FINAL ANSWER: 72"]),
                ("", vec!["FINAL ANSWER: 72", "FINAL ANSWER: 9"]),
            ],
            "unused",
        );
        let result = run(&gateway, Benchmark::Gsm8k);
        assert_eq!(result.prompt_count, 4);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "72");
    }

    #[test]
    fn perpetual_disagreement_stops_at_round_cap() {
        // The match-all rule alternates between two answers, so debater 1
        // always says 1, debater 2 always says 2, and they never agree.
        let gateway = scripted(&["FINAL ANSWER: 1", "FINAL ANSWER: 2"]);
        let result = run(&gateway, Benchmark::Gsm8k);
        // cap of 10 rounds (the initial one plus nine exchanges) = 20 prompts.
        assert_eq!(result.prompt_count, 20);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "1");
    }

    #[test]
    fn first_debaters_answer_wins_on_cap() {
        let gateway = scripted(&["FINAL ANSWER: 5", "FINAL ANSWER: 7"]);
        let result = run(&gateway, Benchmark::Gsm8k);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "5");
    }

    #[test]
    fn unparseable_exchange_is_disagreement_and_final_reask_recovers() {
        // Both debaters babble every round; the final re-ask of debater 1
        // eventually parses.
        let mut replies = vec!["no idea"; 20];
        replies.push("FINAL ANSWER: 3");
        let gateway = scripted(&replies);
        let result = run(&gateway, Benchmark::Gsm8k);
        // 20 debate prompts + 1 recovering re-ask.
        assert_eq!(result.prompt_count, 21);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "3");
    }

    #[test]
    fn histories_stay_per_debater() {
        let gateway = scripted_rules(
            &[
                ("another agent", vec!["FINAL ANSWER: 72"]),
                ("", vec!["FINAL ANSWER: 72", "FINAL ANSWER: 9"]),
            ],
            "unused",
        );
        run(&gateway, Benchmark::Gsm8k);
        let lines = gateway.transcript().lines();
        // Round-1 requests carry each debater's own prior answer as
        // assistant context.
        let histories: Vec<usize> = lines
            .iter()
            .map(|l| l["request"]["messages"].as_array().unwrap().len())
            .collect();
        assert_eq!(histories, vec![1, 1, 3, 3]);
        let third = &lines[2]["request"]["messages"];
        assert_eq!(third[1]["content"], "FINAL ANSWER: 72");
        assert!(third[2]["content"].as_str().unwrap().contains("FINAL ANSWER: 9"));
    }

    #[test]
    fn mmlu_debate_uses_choice_parsing() {
        let gateway = scripted(&["FINAL ANSWER: B"]);
        let result = run(&gateway, Benchmark::Mmlu);
        assert_eq!(result.prompt_count, 2);
        assert_eq!(result.outcome.answer().unwrap().canonical(), "B");
    }
}
