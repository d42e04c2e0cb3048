//! Benchmark datasets: item model, file loaders, grading, and aggregate metrics.

pub mod grade;
pub mod item;
pub mod loaders;
pub mod metrics;
pub mod toy;

pub use grade::{answered_correct, grade, normalize_trivia, sample_correct, Grade};
pub use item::{Benchmark, BenchmarkItem, ChoiceOption, GoldAnswer};
pub use loaders::{load_benchmark, load_gsm8k, load_mmlu, load_triviaqa, LoadError};
pub use metrics::{
    aggregate, average_runs, merge_tool_tallies, occurrence_histogram, per_subject, round2,
    top_n_accuracy, LedgerError, RunAggregate, SampleLedger, SubjectStat, ToolCounts, ToolTally,
};
