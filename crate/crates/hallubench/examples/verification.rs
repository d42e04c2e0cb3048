//! The three self-checking flows, each scripted both ways where abstention
//! exists: verify-then-answer on free text, statement cross-checking on
//! multiple choice, and critique-then-revise.
//!
//!     cargo run --example verification

use hallubench::bench::{grade, BenchmarkItem};
use hallubench::codec::TemplateStore;
use hallubench::gateway::{Gateway, Matcher, MockMode, MockRule, MockScript};
use hallubench::strategy::{run_strategy, StrategyConfig, StrategyDeps, StrategyName, StrategyResult};

fn rule(needle: &str, reply: &str) -> MockRule {
    MockRule {
        matcher: Matcher::Substring(needle.into()),
        responses: vec![reply.into()],
        distribution: Vec::new(),
    }
}

fn run(rules: Vec<MockRule>, name: StrategyName, item: &BenchmarkItem) -> StrategyResult {
    let script =
        MockScript { mode: MockMode::Scripted, rng_seed_base: 0, fallback: "unused".into(), rules };
    let gateway = Gateway::mock(&script).unwrap();
    let store = TemplateStore::builtin();
    let session = gateway.session(format!("{}-{}", name.as_str(), item.id));
    run_strategy(&session, &store, &StrategyConfig::named(name), item, 5, &StrategyDeps::none())
        .unwrap()
}

/// Baseline answer → generated verification question → independent answer to
/// it → contradiction check. NO keeps the answer; YES abstains.
fn verify_freetext(check_reply: &str) -> StrategyResult {
    let item = BenchmarkItem::trivia(
        "author",
        "Who wrote The Hitchhiker's Guide to the Galaxy?",
        &["Douglas Adams"],
    );
    let rules = vec![
        rule(
            "suggest a verification question",
            "Did Douglas Adams write The Hitchhiker's Guide to the Galaxy?",
        ),
        rule("contradict the baseline answer", check_reply),
        rule("Did Douglas Adams write", "Yes — he published the first novel in 1979."),
        rule("Hitchhiker", "FINAL ANSWER: Douglas Adams"),
    ];
    run(rules, StrategyName::Cove1, &item)
}

/// Choice answer → the same question answered open-ended as a statement →
/// check that the statement matches the chosen option.
fn verify_choice(check_reply: &str) -> StrategyResult {
    let item = BenchmarkItem::choice(
        "capital",
        "What is the capital of France?",
        ["Lyon", "Paris", "Marseille", "Nice"],
        "B",
        "geography",
    );
    let rules = vec![
        rule("correspond to option", check_reply),
        rule("form of a statement", "Paris is the capital of France."),
        rule("capital of France", "FINAL ANSWER: B"),
    ];
    run(rules, StrategyName::Cove2, &item)
}

/// Initial attempt → a graders critique → revised answer. The critique
/// steers the revision from the wrong D to the right B.
fn critique_and_revise() -> StrategyResult {
    let item = BenchmarkItem::choice(
        "capital",
        "What is the capital of France?",
        ["Lyon", "Paris", "Marseille", "Nice"],
        "B",
        "geography",
    );
    let rules = vec![
        rule("You are a teacher grading", "The submission chose D, but the capital is Paris: B."),
        rule("Your previous submission:", "FINAL ANSWER: B"),
        rule("capital of France", "I believe the answer is D, Nice."),
    ];
    run(rules, StrategyName::Reflection, &item)
}

fn report(label: &str, result: &StrategyResult) {
    println!("{label}");
    println!("  outcome: {:?}", result.outcome);
    println!("  cost:    {} prompts", result.prompt_count);
}

fn main() {
    report("freetext verification, check says NO (keep the answer):", &verify_freetext("FINAL ANSWER: NO"));
    report("freetext verification, check says YES (abstain):", &verify_freetext("FINAL ANSWER: YES"));
    println!();
    report("choice cross-check, statement matches (keep):", &verify_choice("FINAL ANSWER: YES"));
    report("choice cross-check, statement differs (abstain):", &verify_choice("FINAL ANSWER: NO"));
    println!();
    let revised = critique_and_revise();
    report("critique and revise (wrong first try, corrected):", &revised);
    let item = BenchmarkItem::choice(
        "capital",
        "What is the capital of France?",
        ["Lyon", "Paris", "Marseille", "Nice"],
        "B",
        "geography",
    );
    println!("  grade:   {:?}", grade(&item, &revised.outcome));
}
