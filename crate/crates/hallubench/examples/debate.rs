//! Multi-agent debate with a scripted disagreement. The two debaters open
//! with different answers (12 vs 15), read each other's replies, and
//! converge on 15 in the next round. Cost is two opener calls plus two
//! calls per extra round: 4 here.
//!
//!     cargo run --example debate

use hallubench::bench::{grade, BenchmarkItem};
use hallubench::codec::TemplateStore;
use hallubench::gateway::{Gateway, Matcher, MockMode, MockRule, MockScript};
use hallubench::strategy::{run_strategy, StrategyConfig, StrategyDeps, StrategyName};

fn rule(needle: &str, responses: &[&str]) -> MockRule {
    MockRule {
        matcher: Matcher::Substring(needle.into()),
        responses: responses.iter().map(|r| r.to_string()).collect(),
        distribution: Vec::new(),
    }
}

fn main() {
    let item = BenchmarkItem::numeric(
        "jellybeans",
        "Ann fills 3 jars with 5 jellybeans each. How many jellybeans does she use?",
        "15",
    );

    // The opener rule feeds the two debaters different answers; the exchange
    // rule (each debater sees the other's full reply) converges on 15.
    let script = MockScript {
        mode: MockMode::Scripted,
        rng_seed_base: 0,
        fallback: "unused".into(),
        rules: vec![
            rule(
                "Here is another agents attempt",
                &[
                    "The other agent multiplied instead of adding, and they are right: \
                     3 jars of 5 is 3 x 5.\nFINAL ANSWER: 15",
                    "Sticking with multiplication: 3 x 5 = 15.\nFINAL ANSWER: 15",
                ],
            ),
            rule(
                "Please solve the following maths problem",
                &[
                    "She fills 3 jars, then 5 jellybeans, 3 + 5 + 4 = 12.\nFINAL ANSWER: 12",
                    "3 jars times 5 jellybeans is 15.\nFINAL ANSWER: 15",
                ],
            ),
        ],
    };

    let gateway = Gateway::mock(&script).unwrap();
    let store = TemplateStore::builtin();
    let cfg = StrategyConfig::named(StrategyName::Mad);
    let session = gateway.session("debate-demo");
    let result = run_strategy(&session, &store, &cfg, &item, 3, &StrategyDeps::none()).unwrap();

    println!("question:  {}", item.question);
    println!("round 0:   debater A says 12, debater B says 15 — disagreement");
    println!("round 1:   both debaters converge on 15");
    println!("outcome:   {:?}", result.outcome);
    println!("grade:     {:?}", grade(&item, &result.outcome));
    println!("cost:      {} prompts (2 openers + 2 per extra round)", result.prompt_count);
}
