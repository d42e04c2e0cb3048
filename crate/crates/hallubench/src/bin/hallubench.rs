//! Thin command-line front end over [`hallubench::runner`].

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hallubench::bench::load_benchmark;
use hallubench::runner::{self, ExperimentPlan, OnlyFilter, RunOptions};

#[derive(Parser)]
#[command(
    name = "hallubench",
    about = "Run hallucination-mitigation benchmark grids and build reports",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a plan, resuming any prior partial run in its output dir.
    Run(RunArgs),
    /// Rebuild report.csv, report.json, and plots/ from persisted results.
    Report {
        /// Output directory of a previous run.
        #[arg(long)]
        dir: PathBuf,
    },
    /// Check a plan and its dataset files without calling any backend.
    Validate {
        /// Plan file (JSON).
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Plan file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Discard previous outputs in the plan's output dir first.
    #[arg(long)]
    force: bool,
    /// Restrict the grid, e.g. "strategy=cp,benchmark=triviaqa".
    #[arg(long)]
    only: Option<String>,
    /// Cap every benchmark at this many items.
    #[arg(long)]
    limit: Option<usize>,
    /// Override the plan's worker count.
    #[arg(long)]
    parallelism: Option<usize>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Report { dir } => {
            let files = runner::report_only(&dir).map_err(|e| e.to_string())?;
            println!("wrote {}", files.csv.display());
            println!("wrote {}", files.json.display());
            for plot in files.plots {
                println!("wrote {}", plot.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => validate(&config),
    }
}

fn run(args: RunArgs) -> Result<ExitCode, String> {
    let plan = ExperimentPlan::load(&args.config).map_err(|e| e.to_string())?;
    let only = match &args.only {
        Some(text) => OnlyFilter::parse(text)?,
        None => OnlyFilter::none(),
    };
    let options = RunOptions {
        force: args.force,
        only,
        limit: args.limit,
        parallelism: args.parallelism,
    };
    let summary = runner::run(&plan, &options).map_err(|e| e.to_string())?;
    println!(
        "cells: {} total, {} completed, {} resumed, {} failed; {} queries executed",
        summary.cells_total,
        summary.cells_completed,
        summary.cells_resumed,
        summary.failures.len(),
        summary.queries_executed
    );
    for (cell, message) in &summary.failures {
        eprintln!("cell {cell} failed: {message}");
    }
    if let Some(report) = &summary.report {
        println!("report: {}", report.csv.display());
        println!("report: {}", report.json.display());
    }
    Ok(if summary.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn validate(config: &PathBuf) -> Result<ExitCode, String> {
    let plan = ExperimentPlan::load(config).map_err(|e| e.to_string())?;
    plan.validate().map_err(|e| e.to_string())?;
    for entry in &plan.benchmarks {
        let items =
            load_benchmark(entry.benchmark, &entry.path, entry.limit).map_err(|e| e.to_string())?;
        println!(
            "{}: {} items from {}",
            entry.benchmark.as_str(),
            items.len(),
            entry.path.display()
        );
    }
    println!("plan ok: {} cells, hash {}", plan.cells().len(), plan.plan_hash());
    Ok(ExitCode::SUCCESS)
}
