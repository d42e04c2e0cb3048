//! Self-consistency under a statistical mock. Each of the five samples is
//! independently correct with probability 0.6; the majority vote is correct
//! whenever at least three hit, so query accuracy tracks the binomial tail
//! P(Bin(5, 0.6) >= 3) = 68.3% and the correct-sample histogram tracks the
//! binomial pmf.
//!
//!     cargo run --example self_consistency

use hallubench::bench::{grade, occurrence_histogram, sample_correct, BenchmarkItem, Grade, SampleLedger};
use hallubench::codec::TemplateStore;
use hallubench::gateway::{Gateway, Matcher, MockMode, MockRule, MockScript, WeightedResponse};
use hallubench::seed;
use hallubench::strategy::{run_strategy, StrategyConfig, StrategyDeps, StrategyName};

const QUERIES: u64 = 400;

fn main() {
    let item = BenchmarkItem::numeric("demo", "What is six times seven?", "42");
    let script = MockScript {
        mode: MockMode::Statistical,
        rng_seed_base: 7,
        fallback: "unused".into(),
        rules: vec![MockRule {
            matcher: Matcher::Substring(String::new()),
            responses: Vec::new(),
            distribution: vec![
                WeightedResponse { text: "FINAL ANSWER: 42".into(), probability: 0.6 },
                WeightedResponse { text: "FINAL ANSWER: 13".into(), probability: 0.4 },
            ],
        }],
    };
    let gateway = Gateway::mock(&script).unwrap();
    let store = TemplateStore::builtin();
    let cfg = StrategyConfig::named(StrategyName::Sc);
    let deps = StrategyDeps::none();

    let mut correct = 0u64;
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for q in 0..QUERIES {
        let session = gateway.session(format!("sc-{q}"));
        let result =
            run_strategy(&session, &store, &cfg, &item, seed::child_seed(1, q), &deps).unwrap();
        if matches!(grade(&item, &result.outcome), Grade::Correct) {
            correct += 1;
        }
        rows.push(result.samples.iter().map(|s| sample_correct(&item, s)).collect());
    }

    println!("queries:           {QUERIES}");
    println!("measured accuracy: {:.1}%", 100.0 * correct as f64 / QUERIES as f64);
    println!("binomial P(>=3):   68.3%");
    println!();
    println!("correct samples per query (pmf in parentheses):");
    let refs: Vec<&[bool]> = rows.iter().map(|r| r.as_slice()).collect();
    let histogram = occurrence_histogram(&SampleLedger::from_rows(5, &refs).unwrap());
    let choose = [1.0, 5.0, 10.0, 10.0, 5.0, 1.0];
    for (k, &count) in histogram.iter().enumerate() {
        let pmf = choose[k] * 0.6f64.powi(k as i32) * 0.4f64.powi(5 - k as i32);
        let bar = "#".repeat((count as usize * 60) / QUERIES as usize);
        println!("  {k}: {count:4} ({pmf:.3}) {bar}");
    }
}
