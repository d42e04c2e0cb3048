//! Dataset loading and grading. Loads the three bundled toy fixtures,
//! grades a few outcomes against alias sets, and aggregates a run.
//!
//!     cargo run --example loaders_and_grading
//!
//! Point the loaders at real dataset files to run at full size: a GSM8K
//! test-split jsonl, a TriviaQA validation json, or a directory of MMLU
//! `*_test.csv` files.

use hallubench::bench::{
    aggregate, grade, load_benchmark, normalize_trivia, per_subject, round2, toy, Benchmark,
    BenchmarkItem, Grade,
};
use hallubench::codec::{AnswerValue, ParsedAnswer};
use hallubench::strategy::{AbstainReason, StrategyOutcome};

fn text(value: &str) -> StrategyOutcome {
    StrategyOutcome::answered(ParsedAnswer {
        value: AnswerValue::Text(value.into()),
        reasoning_steps: Vec::new(),
    })
}

fn main() {
    for benchmark in [Benchmark::Gsm8k, Benchmark::Triviaqa, Benchmark::Mmlu] {
        let items = load_benchmark(benchmark, &toy::fixture_path(benchmark), None).unwrap();
        println!("{:9} {} items; first: {}", benchmark.as_str(), items.len(), items[0].question);
    }
    println!();

    // Trivia grading normalizes case, punctuation, and leading articles.
    let item = BenchmarkItem::trivia("demo", "Largest brown seaweed?", &["kelp", "giant kelp"]);
    println!("normalize_trivia(\"The Kelp!\") = {:?}", normalize_trivia("The Kelp!"));
    for outcome in [
        text("The Kelp!"),
        text("bladderwrack"),
        StrategyOutcome::abstained(AbstainReason::Contradiction),
        StrategyOutcome::Invalid,
    ] {
        println!("  {:?} -> {:?}", grade(&item, &outcome), outcome);
    }
    println!();

    // Accuracy is correct/graded; abstentions and invalids leave the
    // denominator.
    let grades = [
        Grade::Correct,
        Grade::Correct,
        Grade::Correct,
        Grade::Hallucinated,
        Grade::Abstained,
        Grade::Invalid,
    ];
    let agg = aggregate(&grades, &[1, 1, 5, 5, 4, 3]);
    println!(
        "aggregate: total={} graded={} accuracy={} avg_cost={}",
        agg.total,
        agg.graded,
        round2(agg.accuracy),
        round2(agg.avg_cost)
    );

    let rows =
        [("algebra", Grade::Correct), ("algebra", Grade::Hallucinated), ("law", Grade::Correct)];
    let by_subject = per_subject(rows.iter().map(|(s, g)| (*s, *g)));
    for (subject, stat) in &by_subject {
        println!("  {subject}: {}/{} = {}%", stat.correct, stat.graded, round2(stat.accuracy));
    }
}
