//! Plan execution: a bounded worker pool over grid cells, append-only
//! persistence with crash-safe resume, and report emission at the end.
//!
//! Work is scheduled per cell; a cell's queries run sequentially on one
//! worker, so at most `parallelism` queries are in flight at once. A failing
//! query fails its cell (which is then not marked complete) while the other
//! cells keep running; everything already persisted survives.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fs;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::bench::{grade, load_benchmark, sample_correct, Benchmark, BenchmarkItem, LoadError};
use crate::codec::TemplateStore;
use crate::gateway::{BackendKind, Gateway, GatewayError, TranscriptSink};
use crate::seed;
use crate::strategy::StrategyDeps;
use crate::tools::{
    fixture_registry, CodeSandbox, FixtureKg, FixtureSearch, LiveDuckDuckGo, LiveWikipedia,
    ToolRegistry, WebSearchTool, WikidataClient, WikipediaTool,
};

use super::plan::{Cell, CellRunner, ExperimentPlan, PlanError};
use super::report::{write_reports, ReportError, ReportFiles, PLOTS_DIR, REPORT_CSV, REPORT_JSON};
use super::state::{
    load_results, JsonlAppender, ResultRecord, RunState, RunnerKind, RESULTS_FILE, STATE_FILE,
    TRACES_FILE, TRANSCRIPTS_FILE,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error(
        "output dir holds results for plan {existing}, but this plan hashes to {requested}; \
         pass --force to discard them"
    )]
    PlanChanged { existing: String, requested: String },
    #[error("the --only filter matched no cells")]
    FilterMatchedNothing,
}

/// Restricts a run to one runner name and/or one benchmark.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OnlyFilter {
    pub strategy: Option<String>,
    pub benchmark: Option<String>,
}

impl OnlyFilter {
    pub fn none() -> Self {
        OnlyFilter::default()
    }

    /// Parse `strategy=cp,benchmark=triviaqa` (either key optional).
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut filter = OnlyFilter::none();
        for part in text.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, got '{part}'"))?;
            match key.trim() {
                "strategy" => filter.strategy = Some(value.trim().to_string()),
                "benchmark" => filter.benchmark = Some(value.trim().to_string()),
                other => return Err(format!("unknown filter key '{other}'")),
            }
        }
        Ok(filter)
    }

    fn admits(&self, cell: &Cell) -> bool {
        if let Some(strategy) = &self.strategy {
            if cell.runner.name() != strategy {
                return false;
            }
        }
        if let Some(benchmark) = &self.benchmark {
            if cell.benchmark.as_str() != benchmark {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Discard any previous outputs in the plan's directory first.
    pub force: bool,
    pub only: OnlyFilter,
    /// Caps every benchmark at this many items (tightest cap wins).
    pub limit: Option<usize>,
    /// Overrides the plan's worker count.
    pub parallelism: Option<usize>,
}

#[derive(Debug)]
pub struct RunSummary {
    pub cells_total: usize,
    pub cells_completed: usize,
    /// Cells skipped because a previous run already finished them.
    pub cells_resumed: usize,
    pub queries_executed: usize,
    /// (cell key, error) per failed cell; failed cells stay incomplete.
    pub failures: Vec<(String, String)>,
    /// Absent only when nothing was ever persisted (all cells failed early).
    pub report: Option<ReportFiles>,
}

struct Shared<'a> {
    plan: &'a ExperimentPlan,
    gateway: &'a Gateway,
    store: &'a TemplateStore,
    registry: &'a ToolRegistry,
    deps: &'a StrategyDeps,
    datasets: &'a BTreeMap<Benchmark, Vec<BenchmarkItem>>,
    results: &'a JsonlAppender,
    traces: &'a JsonlAppender,
    done: &'a BTreeSet<(String, String)>,
    state: &'a Mutex<RunState>,
    dir: &'a Path,
    executed: &'a AtomicUsize,
    failures: &'a Mutex<Vec<(String, String)>>,
}

/// Execute `plan`, resuming over whatever the output directory already holds,
/// then rebuild the reports.
pub fn run(plan: &ExperimentPlan, options: &RunOptions) -> Result<RunSummary, RunError> {
    plan.validate()?;
    let dir = plan.output_dir.clone();
    fs::create_dir_all(&dir)?;
    if options.force {
        clear_outputs(&dir)?;
    }

    let plan_hash = plan.plan_hash();
    let state = match RunState::load(&dir) {
        Some(existing) if existing.plan_hash != plan_hash => {
            return Err(RunError::PlanChanged {
                existing: existing.plan_hash,
                requested: plan_hash,
            });
        }
        Some(existing) => existing,
        None => RunState::new(plan_hash),
    };
    state.save(&dir)?;

    let mut datasets = BTreeMap::new();
    for entry in &plan.benchmarks {
        let limit = match (entry.limit, options.limit) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let items = load_benchmark(entry.benchmark, &entry.path, limit)?;
        if items.is_empty() {
            return Err(PlanError::Invalid(format!(
                "benchmark '{}' loaded zero items from {}",
                entry.benchmark.as_str(),
                entry.path.display()
            ))
            .into());
        }
        datasets.insert(entry.benchmark, items);
    }

    let transcript =
        TranscriptSink::to_file(&dir.join(TRANSCRIPTS_FILE), Gateway::clock_for(plan.backend.kind))?;
    let gateway = Gateway::new(plan.backend.clone(), plan.mock_script.as_ref(), transcript)?;
    let (deps, registry) = match plan.backend.kind {
        BackendKind::Mock => offline_tooling(),
        _ => live_tooling(),
    };
    let store = TemplateStore::builtin();

    let cells: Vec<Cell> = plan.cells().into_iter().filter(|c| options.only.admits(c)).collect();
    if cells.is_empty() {
        return Err(RunError::FilterMatchedNothing);
    }
    let cells_total = cells.len();
    let cell_keys: Vec<String> = cells.iter().map(Cell::key).collect();

    let done: BTreeSet<(String, String)> =
        load_results(&dir).iter().map(ResultRecord::dedupe_key).collect();
    let mut pending = VecDeque::new();
    let mut cells_resumed = 0usize;
    for cell in cells {
        if state.completed_cells.contains(&cell.key()) {
            cells_resumed += 1;
        } else {
            pending.push_back(cell);
        }
    }

    let results = JsonlAppender::open(&dir.join(RESULTS_FILE))?;
    let traces = JsonlAppender::open(&dir.join(TRACES_FILE))?;
    let executed = AtomicUsize::new(0);
    let failures = Mutex::new(Vec::new());
    let state = Mutex::new(state);
    let shared = Shared {
        plan,
        gateway: &gateway,
        store: &store,
        registry: &registry,
        deps: &deps,
        datasets: &datasets,
        results: &results,
        traces: &traces,
        done: &done,
        state: &state,
        dir: &dir,
        executed: &executed,
        failures: &failures,
    };

    let parallelism = options.parallelism.unwrap_or(plan.parallelism).max(1);
    let queue = Mutex::new(pending);
    std::thread::scope(|scope| {
        for _ in 0..parallelism {
            scope.spawn(|| loop {
                let next = queue.lock().expect("queue lock").pop_front();
                match next {
                    Some(cell) => run_cell(&shared, &cell),
                    None => break,
                }
            });
        }
    });

    let failures = failures.into_inner().expect("failures lock");
    let report = match write_reports(&dir) {
        Ok(files) => Some(files),
        Err(ReportError::MissingResults(_)) if !failures.is_empty() => None,
        Err(e) => return Err(e.into()),
    };
    let final_state = state.into_inner().expect("state lock");
    let completed = cell_keys.iter().filter(|k| final_state.completed_cells.contains(*k)).count();
    Ok(RunSummary {
        cells_total,
        cells_completed: completed,
        cells_resumed,
        queries_executed: executed.load(Ordering::Relaxed),
        failures,
        report,
    })
}

/// Rebuild reports for an existing output directory.
pub fn report_only(dir: &Path) -> Result<ReportFiles, ReportError> {
    write_reports(dir)
}

fn run_cell(shared: &Shared<'_>, cell: &Cell) {
    let key = cell.key();
    let items = &shared.datasets[&cell.benchmark];
    for item in items {
        if shared.done.contains(&(key.clone(), item.id.clone())) {
            continue;
        }
        if let Err(message) = run_query(shared, cell, item) {
            shared.failures.lock().expect("failures lock").push((key.clone(), message));
            return;
        }
        shared.executed.fetch_add(1, Ordering::Relaxed);
    }
    let mut state = shared.state.lock().expect("state lock");
    state.completed_cells.insert(key.clone());
    if let Err(e) = state.save(shared.dir) {
        drop(state);
        shared
            .failures
            .lock()
            .expect("failures lock")
            .push((key, format!("state save failed: {e}")));
    }
}

fn run_query(shared: &Shared<'_>, cell: &Cell, item: &BenchmarkItem) -> Result<(), String> {
    let key = cell.key();
    let session = shared.gateway.session(format!("{key}|{}", item.id));
    let query_seed = seed::query_seed(
        shared.plan.rng_seed,
        cell.benchmark.as_str(),
        &item.id,
        cell.runner.name(),
        cell.temperature,
        cell.run_index,
    );

    let (kind, outcome, prompt_count, samples_correct) = match &cell.runner {
        CellRunner::Strategy(cfg) => {
            let result =
                crate::strategy::run_strategy(&session, shared.store, cfg, item, query_seed, shared.deps)
                    .map_err(|e| e.to_string())?;
            let samples: Vec<bool> =
                result.samples.iter().map(|s| sample_correct(item, s)).collect();
            (RunnerKind::Strategy, result.outcome, result.prompt_count, samples)
        }
        CellRunner::Agent(cfg) => {
            let trace =
                crate::agent::run_agent(&session, shared.store, item, cfg, shared.registry, query_seed)
                    .map_err(|e| e.to_string())?;
            let mut line = trace.record(&item.id, cfg.architecture);
            line.cell = key.clone();
            shared.traces.append(&line).map_err(|e| e.to_string())?;
            (RunnerKind::Agent, trace.final_answer, trace.prompt_count, Vec::new())
        }
    };

    let record = ResultRecord {
        benchmark: cell.benchmark,
        runner: cell.runner.name().to_string(),
        kind,
        temperature: cell.temperature,
        run_index: cell.run_index,
        query_id: item.id.clone(),
        subject: item.subject.clone(),
        grade: grade(item, &outcome),
        outcome,
        prompt_count,
        samples_correct,
    };
    shared.results.append(&record).map_err(|e| e.to_string())
}

/// Offline tool wiring for mock backends: fixture wiki/search/KG plus the
/// local code sandbox. Makes no network calls.
fn offline_tooling() -> (StrategyDeps, ToolRegistry) {
    let deps = StrategyDeps {
        kg: Some(Arc::new(FixtureKg::with_defaults())),
        search: Some(Arc::new(FixtureSearch::with_defaults())),
    };
    (deps, fixture_registry())
}

/// Live tool wiring for HTTP backends: Wikipedia, DuckDuckGo, Wikidata (the
/// latter cached on disk), and the local code sandbox.
fn live_tooling() -> (StrategyDeps, ToolRegistry) {
    let search = Arc::new(LiveDuckDuckGo::public());
    let deps = StrategyDeps {
        kg: Some(Arc::new(WikidataClient::public())),
        search: Some(search.clone()),
    };
    let mut registry = ToolRegistry::new();
    registry.insert(Arc::new(WikipediaTool::new(Arc::new(LiveWikipedia::english()))));
    registry.insert(Arc::new(WebSearchTool::new(search)));
    registry.insert(Arc::new(CodeSandbox::default()));
    (deps, registry)
}

fn clear_outputs(dir: &Path) -> std::io::Result<()> {
    for name in [RESULTS_FILE, TRACES_FILE, TRANSCRIPTS_FILE, STATE_FILE, REPORT_CSV, REPORT_JSON] {
        match fs::remove_file(dir.join(name)) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
    }
    match fs::remove_dir_all(dir.join(PLOTS_DIR)) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(()),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::toy;
    use crate::gateway::BackendConfig;
    use crate::runner::plan::BenchmarkEntry;
    use crate::strategy::{StrategyConfig, StrategyName};

    fn toy_plan(dir: &Path, benchmark: Benchmark, strategies: Vec<StrategyConfig>) -> ExperimentPlan {
        let items = toy::load_fixture(benchmark);
        ExperimentPlan {
            backend: BackendConfig::mock(),
            mock_script: Some(toy::scripted_toy_backend(&items)),
            strategies,
            agents: Vec::new(),
            benchmarks: vec![BenchmarkEntry {
                benchmark,
                path: toy::fixture_path(benchmark),
                limit: Some(6),
            }],
            temperatures: vec![0.2],
            runs: 2,
            parallelism: 3,
            output_dir: dir.to_path_buf(),
            rng_seed: 11,
        }
    }

    #[test]
    fn control_run_grades_and_reports() {
        let dir = tempfile::tempdir().unwrap();
        let plan = toy_plan(
            dir.path(),
            Benchmark::Gsm8k,
            vec![StrategyConfig::named(StrategyName::Control)],
        );
        let summary = run(&plan, &RunOptions::default()).unwrap();
        assert_eq!(summary.cells_total, 2);
        assert_eq!(summary.cells_completed, 2);
        assert_eq!(summary.queries_executed, 12);
        assert!(summary.failures.is_empty());

        let csv = fs::read_to_string(dir.path().join(REPORT_CSV)).unwrap();
        // 6 items, one scripted wrong (index 2): 5/6 correct in both runs.
        assert!(csv.contains("gsm8k,control,0.20,2,6.00,1.00,6.00,1.00,5.00,0.00,0.00,83.33"), "{csv}");
    }

    #[test]
    fn rerun_resumes_without_new_queries() {
        let dir = tempfile::tempdir().unwrap();
        let plan = toy_plan(
            dir.path(),
            Benchmark::Triviaqa,
            vec![StrategyConfig::named(StrategyName::Control)],
        );
        let first = run(&plan, &RunOptions::default()).unwrap();
        assert_eq!(first.queries_executed, 12);
        let report1 = fs::read(dir.path().join(REPORT_CSV)).unwrap();

        let second = run(&plan, &RunOptions::default()).unwrap();
        assert_eq!(second.queries_executed, 0);
        assert_eq!(second.cells_resumed, 2);
        assert_eq!(report1, fs::read(dir.path().join(REPORT_CSV)).unwrap());
    }

    #[test]
    fn partial_results_are_skipped_on_resume() {
        let dir = tempfile::tempdir().unwrap();
        let plan = toy_plan(
            dir.path(),
            Benchmark::Gsm8k,
            vec![StrategyConfig::named(StrategyName::Control)],
        );
        let full = run(&plan, &RunOptions::default()).unwrap();
        assert_eq!(full.queries_executed, 12);
        let reference = fs::read(dir.path().join(REPORT_CSV)).unwrap();

        // Simulate a kill: keep the first 7 result lines, drop the state file.
        let results_path = dir.path().join(RESULTS_FILE);
        let text = fs::read_to_string(&results_path).unwrap();
        let kept: Vec<&str> = text.lines().take(7).collect();
        fs::write(&results_path, format!("{}\n", kept.join("\n"))).unwrap();
        fs::remove_file(dir.path().join(STATE_FILE)).unwrap();

        let resumed = run(&plan, &RunOptions::default()).unwrap();
        assert_eq!(resumed.queries_executed, 5);
        assert_eq!(resumed.cells_completed, 2);
        assert_eq!(reference, fs::read(dir.path().join(REPORT_CSV)).unwrap());
    }

    #[test]
    fn changed_plan_requires_force() {
        let dir = tempfile::tempdir().unwrap();
        let plan = toy_plan(
            dir.path(),
            Benchmark::Gsm8k,
            vec![StrategyConfig::named(StrategyName::Control)],
        );
        run(&plan, &RunOptions::default()).unwrap();

        let mut changed = plan.clone();
        changed.rng_seed = 999;
        let err = run(&changed, &RunOptions::default()).unwrap_err();
        assert!(matches!(err, RunError::PlanChanged { .. }));

        let summary =
            run(&changed, &RunOptions { force: true, ..RunOptions::default() }).unwrap();
        assert_eq!(summary.queries_executed, 12);
    }

    #[test]
    fn only_filter_restricts_cells() {
        let dir = tempfile::tempdir().unwrap();
        let plan = toy_plan(
            dir.path(),
            Benchmark::Gsm8k,
            vec![
                StrategyConfig::named(StrategyName::Control),
                StrategyConfig::named(StrategyName::Cot),
            ],
        );
        let options = RunOptions {
            only: OnlyFilter::parse("strategy=cot,benchmark=gsm8k").unwrap(),
            ..RunOptions::default()
        };
        let summary = run(&plan, &options).unwrap();
        assert_eq!(summary.cells_total, 2);
        let csv = fs::read_to_string(dir.path().join(REPORT_CSV)).unwrap();
        assert!(csv.contains(",cot,"));
        assert!(!csv.contains(",control,"));

        let err = run(
            &plan,
            &RunOptions {
                only: OnlyFilter::parse("strategy=nonexistent").unwrap(),
                ..RunOptions::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, RunError::FilterMatchedNothing));
    }

    #[test]
    fn only_filter_rejects_unknown_keys() {
        assert!(OnlyFilter::parse("model=gpt").is_err());
        assert!(OnlyFilter::parse("strategy").is_err());
        assert_eq!(OnlyFilter::parse("").unwrap(), OnlyFilter::none());
    }

    #[test]
    fn zero_item_benchmark_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut plan = toy_plan(
            dir.path(),
            Benchmark::Gsm8k,
            vec![StrategyConfig::named(StrategyName::Control)],
        );
        plan.benchmarks[0].limit = Some(6);
        let options = RunOptions { limit: Some(0), ..RunOptions::default() };
        assert!(run(&plan, &options).is_err());
    }
}
