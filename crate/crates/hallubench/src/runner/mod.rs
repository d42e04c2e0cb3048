//! Experiment orchestration: plans, parallel execution with resume, and
//! deterministic report emission.

pub mod execute;
pub mod plan;
pub mod report;
pub mod state;

pub use execute::{report_only, run, OnlyFilter, RunError, RunOptions, RunSummary};
pub use plan::{BenchmarkEntry, Cell, CellRunner, ExperimentPlan, PlanError, BACKEND_URL_ENV};
pub use report::{write_reports, ReportError, ReportFiles, CSV_HEADER, PLOTS_DIR, REPORT_CSV, REPORT_JSON};
pub use state::{
    dedupe_keep_first, load_results, JsonlAppender, ResultRecord, RunState, RunnerKind,
    RESULTS_FILE, STATE_FILE, TRACES_FILE, TRANSCRIPTS_FILE,
};
