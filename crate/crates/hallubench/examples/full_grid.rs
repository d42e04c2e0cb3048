//! The whole offline experiment grid: every strategy and agent on each
//! benchmark it supports, two runs per cell, against the bundled 30-item
//! fixtures and a scripted backend. Produces resumable result logs, a CSV
//! and JSON report, and plot-ready TSVs — rerunning the example resumes
//! instead of recomputing.
//!
//!     cargo run --example full_grid

use std::fs;
use std::path::PathBuf;

use hallubench::agent::{AgentConfig, Architecture};
use hallubench::bench::{toy, Benchmark};
use hallubench::gateway::BackendConfig;
use hallubench::runner::{run, BenchmarkEntry, ExperimentPlan, RunOptions};
use hallubench::strategy::{StrategyConfig, StrategyName};

/// One plan per benchmark, because a plan requires every runner it lists to
/// be legal on every benchmark it lists.
fn parts() -> Vec<(Benchmark, Vec<StrategyName>, Vec<Architecture>)> {
    use Architecture::{Chain, React, ReactDdg};
    use StrategyName::{Control, Cot, Cove1, Cove2, Cp, Ddga, Kgr, Mad, Reflection, Sc, ScCot, Tot};
    vec![
        (Benchmark::Gsm8k, vec![Control, Cot, Sc, ScCot, Tot, Mad], vec![Chain, React]),
        (
            Benchmark::Triviaqa,
            vec![Control, Sc, Cp, Kgr, Cove1, Mad, Ddga],
            vec![Chain, React, ReactDdg],
        ),
        (Benchmark::Mmlu, vec![Control, Sc, Cp, Mad, Reflection, Cove2], vec![Chain, React]),
    ]
}

fn main() {
    let out_root = std::env::temp_dir().join("hallubench-grid-demo");
    println!("writing to {}", out_root.display());

    let mut report_paths: Vec<PathBuf> = Vec::new();
    for (benchmark, strategies, agents) in parts() {
        let items = toy::load_fixture(benchmark);
        let output_dir = out_root.join(benchmark.as_str());
        let plan = ExperimentPlan {
            backend: BackendConfig::mock(),
            mock_script: Some(toy::scripted_toy_backend(&items)),
            strategies: strategies.into_iter().map(StrategyConfig::named).collect(),
            agents: agents.into_iter().map(AgentConfig::new).collect(),
            benchmarks: vec![BenchmarkEntry {
                benchmark,
                path: toy::fixture_path(benchmark),
                limit: None,
            }],
            temperatures: vec![0.2],
            runs: 2,
            parallelism: 4,
            output_dir,
            rng_seed: 5,
        };
        let summary = run(&plan, &RunOptions::default()).unwrap();
        println!(
            "{:9} {} cells ({} resumed), {} queries executed, {} failures",
            benchmark.as_str(),
            summary.cells_total,
            summary.cells_resumed,
            summary.queries_executed,
            summary.failures.len(),
        );
        if let Some(report) = summary.report {
            report_paths.push(report.csv);
        }
    }

    println!();
    for path in &report_paths {
        println!("--- {}", path.display());
        print!("{}", fs::read_to_string(path).unwrap());
    }
    println!("--- plots/*.tsv next to each report are gnuplot/pandas-ready");
}
