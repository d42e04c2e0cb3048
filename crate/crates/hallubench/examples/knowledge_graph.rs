//! Grounding an answer in a knowledge graph: entity lookup, property
//! selection, and a re-answer with the retrieved triple as context. Runs
//! against the in-memory fixture graph; swap in `WikidataClient::public()`
//! for the real thing (responses are cached under `HARNESS_CACHE_DIR`).
//!
//!     cargo run --example knowledge_graph

use std::sync::Arc;

use hallubench::bench::{grade, BenchmarkItem};
use hallubench::codec::TemplateStore;
use hallubench::gateway::{Gateway, Matcher, MockMode, MockRule, MockScript};
use hallubench::strategy::{run_strategy, StrategyConfig, StrategyDeps, StrategyName};
use hallubench::tools::{FixtureKg, KnowledgeGraph};

fn main() {
    let kg = FixtureKg::with_defaults();

    // The raw client surface the strategy drives.
    let candidates = kg.search_entity("douglas adams").unwrap();
    println!("entity search 'douglas adams':");
    for c in &candidates {
        println!("  {} — {} ({})", c.entity_id, c.label, c.description);
    }
    let properties = kg.list_properties("Q42").unwrap();
    println!("properties of Q42:");
    for p in &properties {
        println!("  {} — {}", p.property_id, p.label);
    }
    let triple = kg.get_property("Q42", "P106").unwrap();
    println!("triple: {} — {}: {}", triple.subject_label, triple.property_label, triple.value_text);
    println!();

    // The full strategy: baseline answer, entity extraction, property
    // selection, grounded re-answer. Four prompts.
    let item = BenchmarkItem::trivia(
        "occupation",
        "What was Douglas Adams's occupation?",
        &["writer"],
    );
    let script = MockScript {
        mode: MockMode::Scripted,
        rng_seed_base: 0,
        fallback: "unused".into(),
        rules: vec![
            MockRule {
                matcher: Matcher::Substring("searching up an entity".into()),
                responses: vec!["FINAL ANSWER: Douglas Adams".into()],
                distribution: Vec::new(),
            },
            MockRule {
                matcher: Matcher::Substring("Select which one of the following properties".into()),
                responses: vec!["FINAL ANSWER: occupation".into()],
                distribution: Vec::new(),
            },
            MockRule {
                matcher: Matcher::Substring("occupation?".into()),
                // First the ungrounded guess, then the grounded final answer.
                responses: vec!["FINAL ANSWER: author".into(), "FINAL ANSWER: writer".into()],
                distribution: Vec::new(),
            },
        ],
    };
    let gateway = Gateway::mock(&script).unwrap();
    let store = TemplateStore::builtin();
    let deps = StrategyDeps { kg: Some(Arc::new(kg)), search: None };
    let session = gateway.session("kg-demo");
    let cfg = StrategyConfig::named(StrategyName::Kgr);
    let result = run_strategy(&session, &store, &cfg, &item, 5, &deps).unwrap();

    println!("question: {}", item.question);
    println!("outcome:  {:?}", result.outcome);
    println!("grade:    {:?}", grade(&item, &result.outcome));
    println!("cost:     {} prompts", result.prompt_count);
}
