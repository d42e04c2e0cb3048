//! Smallest possible run: one strategy, one query, a scripted mock backend.
//!
//!     cargo run --example quickstart

use hallubench::bench::{grade, toy, Benchmark};
use hallubench::codec::TemplateStore;
use hallubench::gateway::Gateway;
use hallubench::strategy::{run_strategy, StrategyConfig, StrategyDeps, StrategyName};

fn main() {
    let items = toy::load_fixture(Benchmark::Gsm8k);
    let gateway = Gateway::mock(&toy::scripted_toy_backend(&items)).unwrap();
    let store = TemplateStore::builtin();
    let cfg = StrategyConfig::named(StrategyName::Control);
    let deps = StrategyDeps::none();

    let item = &items[0];
    let session = gateway.session(item.id.as_str());
    let result = run_strategy(&session, &store, &cfg, item, 7, &deps).unwrap();

    println!("question: {}", item.question);
    println!("outcome:  {:?}", result.outcome);
    println!("grade:    {:?}", grade(item, &result.outcome));
    println!("cost:     {} prompt(s)", result.prompt_count);
}
