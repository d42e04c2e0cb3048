//! Runs the control strategy against a real chat endpoint. Needs a server
//! speaking the standard chat-completions shape (or an Ollama one):
//!
//!     export HARNESS_BACKEND_URL=http://localhost:11434
//!     export HARNESS_BACKEND_KIND=ollama_http   # or openai_http (default)
//!     export HARNESS_MODEL_NAME=llama3
//!     cargo run --example live_endpoint

use std::env;

use hallubench::bench::{toy, Benchmark};
use hallubench::gateway::{BackendConfig, BackendKind};
use hallubench::runner::{run, BenchmarkEntry, ExperimentPlan, RunOptions, BACKEND_URL_ENV};
use hallubench::strategy::{StrategyConfig, StrategyName};

fn main() {
    let url = match env::var(BACKEND_URL_ENV) {
        Ok(value) if !value.trim().is_empty() => value,
        _ => {
            println!("set {BACKEND_URL_ENV} to a chat endpoint to run this example, e.g.");
            println!("  HARNESS_BACKEND_URL=http://localhost:11434 \\");
            println!("  HARNESS_BACKEND_KIND=ollama_http \\");
            println!("  HARNESS_MODEL_NAME=llama3 cargo run --example live_endpoint");
            return;
        }
    };
    let kind = match env::var("HARNESS_BACKEND_KIND").as_deref() {
        Ok("ollama_http") => BackendKind::OllamaHttp,
        _ => BackendKind::OpenaiHttp,
    };
    let model_name = env::var("HARNESS_MODEL_NAME").unwrap_or_else(|_| "default".into());

    let output_dir = std::env::temp_dir().join("hallubench-live-demo");
    let plan = ExperimentPlan {
        backend: BackendConfig {
            kind,
            base_url: Some(url),
            model_name,
            timeout_ms: 120_000,
            max_retries: 2,
            retry_backoff_ms: 500,
        },
        mock_script: None,
        strategies: vec![StrategyConfig::named(StrategyName::Control)],
        agents: Vec::new(),
        benchmarks: vec![BenchmarkEntry {
            benchmark: Benchmark::Gsm8k,
            path: toy::fixture_path(Benchmark::Gsm8k),
            limit: Some(5),
        }],
        temperatures: vec![0.2],
        runs: 1,
        parallelism: 2,
        output_dir,
        rng_seed: 0,
    };

    match run(&plan, &RunOptions::default()) {
        Ok(summary) => {
            println!(
                "{} queries executed, {} failures",
                summary.queries_executed,
                summary.failures.len()
            );
            for (cell, message) in &summary.failures {
                println!("  {cell}: {message}");
            }
            if let Some(report) = summary.report {
                println!("report: {}", report.csv.display());
                print!("{}", std::fs::read_to_string(&report.csv).unwrap());
            }
        }
        Err(e) => println!("run failed: {e}"),
    }
}
