//! Tool-calling agents over the fixture tools. The chain architecture makes
//! exactly two queries (gather tool calls, then answer); the react loop runs
//! free-form until a plain-text answer — here it recovers from a failed
//! Python import by reading the error as an observation.
//!
//!     cargo run --example agents

use hallubench::agent::{run_agent, AgentConfig, AgentTrace, Architecture};
use hallubench::bench::{grade, BenchmarkItem};
use hallubench::codec::TemplateStore;
use hallubench::gateway::{Gateway, Matcher, MockMode, MockRule, MockScript};
use hallubench::tools::fixture_registry;

fn rule(needle: &str, responses: &[&str]) -> MockRule {
    MockRule {
        matcher: Matcher::Substring(needle.into()),
        responses: responses.iter().map(|r| r.to_string()).collect(),
        distribution: Vec::new(),
    }
}

fn print_trace(label: &str, item: &BenchmarkItem, trace: &AgentTrace) {
    println!("{label}");
    for (i, step) in trace.steps.iter().enumerate() {
        match (&step.action, &step.observation) {
            (Some(call), Some(obs)) => {
                let obs_line = obs.lines().last().unwrap_or(obs);
                println!("  step {i}: {} {} -> {}", call.name, call.arguments, obs_line);
            }
            _ => println!("  step {i}: {}", step.thought.lines().next().unwrap_or("")),
        }
    }
    println!("  answer: {:?}", trace.final_answer);
    println!("  grade:  {:?}", grade(item, &trace.final_answer));
    println!("  tools:  {:?}", trace.tool_stats);
    println!("  cost:   {} prompts", trace.prompt_count);
    println!();
}

fn main() {
    let item = BenchmarkItem::trivia(
        "alginate",
        "Which seaweed is the primary commercial source of alginates?",
        &["kelp"],
    );
    let store = TemplateStore::builtin();
    let registry = fixture_registry();

    // Chain: the first reply requests two tool calls, the second answers
    // with their outputs in context.
    let tool_request = r#"{"tool_calls": [
        {"name": "web_search", "arguments": {"query": "primary source of alginates"}},
        {"name": "wikipedia_lookup", "arguments": {"query": "Kelp"}}
    ]}"#;
    let script = MockScript {
        mode: MockMode::Scripted,
        rng_seed_base: 0,
        fallback: "unused".into(),
        rules: vec![rule("alginates", &[tool_request, "FINAL ANSWER: Kelp"])],
    };
    let gateway = Gateway::mock(&script).unwrap();
    let session = gateway.session("chain-demo");
    let cfg = AgentConfig::new(Architecture::Chain);
    let trace = run_agent(&session, &store, &item, &cfg, &registry, 7).unwrap();
    print_trace("chain (search + lookup, then answer):", &item, &trace);

    // React: the model tries `import wikipedia` in the code sandbox, the
    // sandbox reports the missing module, and the next reply answers anyway.
    let exec_request = r#"{"tool_calls": [{"name": "exec_code",
        "arguments": {"source": "import wikipedia\nprint(wikipedia.summary('kelp'))"}}]}"#;
    let script = MockScript {
        mode: MockMode::Scripted,
        rng_seed_base: 0,
        fallback: "unused".into(),
        rules: vec![
            rule("No module named", &["FINAL ANSWER: Kelp"]),
            rule("alginates", &[exec_request]),
        ],
    };
    let gateway = Gateway::mock(&script).unwrap();
    let session = gateway.session("react-demo");
    let cfg = AgentConfig::new(Architecture::React);
    let trace = run_agent(&session, &store, &item, &cfg, &registry, 7).unwrap();
    print_trace("react (failed import becomes an observation):", &item, &trace);
}
