//! Shared scaffolding for strategy tests: canned items, configs, and
//! scripted gateways.

use crate::bench::{Benchmark, BenchmarkItem};
use crate::codec::TemplateStore;
use crate::gateway::{Gateway, Matcher, MockMode, MockRule, MockScript};

use super::config::{StrategyConfig, StrategyName};

/// Gateway whose single rule matches every prompt, consuming `responses`
/// in order and cycling once exhausted.
pub fn scripted(responses: &[&str]) -> Gateway {
    scripted_rules(&[("", responses.to_vec())], "unmatched")
}

/// Gateway with one substring-matched response list per entry; first match wins.
pub fn scripted_rules(rules: &[(&str, Vec<&str>)], fallback: &str) -> Gateway {
    Gateway::mock(&MockScript {
        mode: MockMode::Scripted,
        rng_seed_base: 0,
        fallback: fallback.into(),
        rules: rules
            .iter()
            .map(|(needle, responses)| MockRule {
                matcher: Matcher::Substring(needle.to_string()),
                responses: responses.iter().map(|s| s.to_string()).collect(),
                distribution: Vec::new(),
            })
            .collect(),
    })
    .expect("test script is valid")
}

pub fn item_for(benchmark: Benchmark) -> BenchmarkItem {
    match benchmark {
        Benchmark::Gsm8k => BenchmarkItem::numeric("g1", "What is 6 times 12?", "72"),
        Benchmark::Triviaqa => BenchmarkItem::trivia(
            "t1",
            "Which large brown seaweed is farmed for its alginates?",
            &["Kelp", "Giant kelp"],
        ),
        Benchmark::Mmlu => BenchmarkItem::choice(
            "m1",
            "Which tissue carries water upward in plants?",
            ["Phloem", "Xylem", "Cambium", "Cork"],
            "B",
            "toy_botany",
        ),
    }
}

pub fn ctx_gateway(benchmark: Benchmark, strategy: &str) -> (TemplateStore, BenchmarkItem, StrategyConfig) {
    let name = StrategyName::parse(strategy).expect("known strategy");
    (TemplateStore::builtin(), item_for(benchmark), StrategyConfig::named(name))
}
