//! Bundled 30-item datasets plus a fully scripted backend for them.
//!
//! The script answers every strategy prompt deterministically: one rule per
//! question (keyed on the question text, which every strategy embeds in at
//! least one prompt or carries in session history), preceded by rules for the
//! auxiliary prompts that do not quote the question's gold answer. Every third
//! item out of five is answered incorrectly so graded runs land at 80%
//! accuracy with a mix of correct and hallucinated outcomes.

use std::path::PathBuf;

use super::item::{Benchmark, BenchmarkItem, GoldAnswer};
use super::loaders;
use crate::gateway::{Matcher, MockMode, MockRule, MockScript};

pub fn fixture_path(benchmark: Benchmark) -> PathBuf {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    match benchmark {
        Benchmark::Gsm8k => root.join("gsm8k_toy.jsonl"),
        Benchmark::Triviaqa => root.join("triviaqa_toy.json"),
        Benchmark::Mmlu => root.join("mmlu_toy"),
    }
}

pub fn load_fixture(benchmark: Benchmark) -> Vec<BenchmarkItem> {
    loaders::load_benchmark(benchmark, &fixture_path(benchmark), None)
        .expect("bundled fixture must load")
}

/// Whether the scripted backend answers fixture item `index` incorrectly.
pub fn scripted_wrong(index: usize) -> bool {
    index % 5 == 2
}

/// A reply value that grades as correct for `item`.
pub fn gold_text(item: &BenchmarkItem) -> String {
    match &item.gold {
        GoldAnswer::Numeric(n) => n.clone(),
        GoldAnswer::Aliases(aliases) => {
            aliases.iter().next().expect("aliases are non-empty").clone()
        }
        GoldAnswer::Label(label) => label.clone(),
    }
}

/// A reply value that parses cleanly but grades as hallucinated for `item`.
pub fn wrong_text(item: &BenchmarkItem) -> String {
    match &item.gold {
        GoldAnswer::Numeric(n) => format!("9{n}"),
        GoldAnswer::Aliases(_) => "a completely different thing".into(),
        GoldAnswer::Label(label) => match label.as_str() {
            "A" => "B".into(),
            "B" => "C".into(),
            "C" => "D".into(),
            _ => "A".into(),
        },
    }
}

fn say(matcher_substring: &str, reply: &str) -> MockRule {
    MockRule {
        matcher: Matcher::Substring(matcher_substring.to_string()),
        responses: vec![reply.to_string()],
        distribution: Vec::new(),
    }
}

/// Builds the scripted backend covering every strategy over `items`.
///
/// Rule order matters: auxiliary prompts (votes, verification checks,
/// knowledge-graph lookups) are matched before the per-question rules so a
/// question quoted inside them cannot shadow the auxiliary reply. Single
/// response lists make every rule stateless, so replies are identical under
/// any worker interleaving and across resumed runs.
pub fn scripted_toy_backend(items: &[BenchmarkItem]) -> MockScript {
    let mut rules = vec![
        say("vote which of the following options", "FINAL ANSWER: 1"),
        say("contradict the baseline answer", "FINAL ANSWER: NO"),
        say("correspond to option", "FINAL ANSWER: YES"),
        say(
            "suggest a verification question",
            "Can you confirm that the key fact in the answer is accurate?",
        ),
        say("searching up an entity", "FINAL ANSWER: Douglas Adams"),
        say("Select which one of the following properties", "FINAL ANSWER: occupation"),
        say("confirm that the key fact", "The key fact is consistent with the baseline answer."),
    ];
    for (index, item) in items.iter().enumerate() {
        let value = if scripted_wrong(index) { wrong_text(item) } else { gold_text(item) };
        rules.push(say(
            &item.question,
            &format!(
                "STEP 1: consider the question carefully.\nSTEP 2: settle on the result.\nFINAL ANSWER: {value}"
            ),
        ));
    }
    MockScript { mode: MockMode::Scripted, rng_seed_base: 0, fallback: "FINAL ANSWER: 0".into(), rules }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::MockBackend;
    use crate::gateway::{ChatMessage, CompletionRequest};

    #[test]
    fn fixtures_load_for_all_benchmarks() {
        for benchmark in [Benchmark::Gsm8k, Benchmark::Triviaqa, Benchmark::Mmlu] {
            let items = load_fixture(benchmark);
            assert_eq!(items.len(), 30, "{benchmark} fixture size");
            for item in &items {
                assert!(item.validate().is_ok());
            }
        }
    }

    #[test]
    fn script_validates_and_answers_by_question() {
        let items = load_fixture(Benchmark::Triviaqa);
        let backend = MockBackend::new(&scripted_toy_backend(&items)).unwrap();
        let ask = |text: &str| {
            let request = CompletionRequest::new(vec![ChatMessage::user(text)], 0.2);
            backend.respond(&request).content
        };

        // Item 0 is correct, item 2 is scripted wrong.
        assert!(ask(&items[0].question).ends_with(&format!("FINAL ANSWER: {}", gold_text(&items[0]))));
        assert!(ask(&items[2].question).ends_with(&format!("FINAL ANSWER: {}", wrong_text(&items[2]))));
        // Auxiliary prompts win even when the question is quoted inside them.
        let vote = format!(
            "Please vote which of the following options have the most correct reasoning: 1) {}",
            items[0].question
        );
        assert_eq!(ask(&vote), "FINAL ANSWER: 1");
        assert_eq!(ask("unmatched prompt"), "FINAL ANSWER: 0");
    }

    #[test]
    fn wrong_values_never_grade_correct() {
        for benchmark in [Benchmark::Gsm8k, Benchmark::Triviaqa, Benchmark::Mmlu] {
            for item in load_fixture(benchmark) {
                assert_ne!(gold_text(&item), wrong_text(&item));
                let parsed = crate::codec::ParsedAnswer {
                    value: match item.benchmark {
                        Benchmark::Gsm8k => crate::codec::AnswerValue::Numeric(wrong_text(&item)),
                        Benchmark::Triviaqa => crate::codec::AnswerValue::Text(wrong_text(&item)),
                        Benchmark::Mmlu => crate::codec::AnswerValue::Choice(wrong_text(&item)),
                    },
                    reasoning_steps: Vec::new(),
                };
                assert!(!super::super::grade::answered_correct(&item, &parsed));
            }
        }
    }
}
