//! Report emission: a flat CSV, a structured JSON report, and tab-separated
//! plot data, all rebuilt deterministically from the persisted result and
//! trace logs. No wall-clock data is written, so re-running the report over
//! the same logs reproduces the same bytes.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::agent::TraceRecord;
use crate::bench::{
    aggregate, average_runs, merge_tool_tallies, occurrence_histogram, per_subject, round2,
    top_n_accuracy, Grade, RunAggregate, SampleLedger, SubjectStat, ToolTally,
};
use crate::strategy::StrategyOutcome;

use super::state::{dedupe_keep_first, load_results, ResultRecord, RESULTS_FILE, TRACES_FILE};

pub const REPORT_CSV: &str = "report.csv";
pub const REPORT_JSON: &str = "report.json";
pub const PLOTS_DIR: &str = "plots";

pub const CSV_HEADER: &str =
    "benchmark,strategy,temperature,runs,total,cost,graded,hallucinated,correct,abstained,invalid,accuracy";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no persisted results under {0}; run the plan first")]
    MissingResults(PathBuf),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Paths written by [`write_reports`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub plots: Vec<PathBuf>,
}

/// One reporting group: every run of a (benchmark, runner, temperature)
/// triple, with the run mean and the derived per-sample views.
#[derive(Debug, Serialize)]
struct ReportRow {
    benchmark: String,
    strategy: String,
    temperature: f64,
    runs: usize,
    mean: RunAggregate,
    per_run: Vec<RunAggregate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    top_n: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    sample_histogram: Vec<u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    subjects: BTreeMap<String, SubjectStat>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    abstain_reasons: BTreeMap<String, u64>,
}

#[derive(Debug, Serialize)]
struct CompatRow {
    benchmark: String,
    strategy: String,
    temperature: f64,
    runs: usize,
    mean: RunAggregate,
    per_run: Vec<RunAggregate>,
}

#[derive(Debug, Serialize)]
struct Report {
    rows: Vec<ReportRow>,
    /// GSM8K rows restated under the grading convention that counts invalid
    /// replies as graded-and-wrong instead of excluding them.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    gsm8k_paper_compat: Vec<CompatRow>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    tool_usage: BTreeMap<String, ToolTally>,
}

/// Rebuild report.csv, report.json, and plots/*.tsv from the logs in `dir`.
pub fn write_reports(dir: &Path) -> Result<ReportFiles, ReportError> {
    let records = dedupe_keep_first(load_results(dir));
    if records.is_empty() {
        return Err(ReportError::MissingResults(dir.join(RESULTS_FILE)));
    }
    let rows = build_rows(&records);
    let tool_usage = tool_usage(dir);

    let csv_path = dir.join(REPORT_CSV);
    fs::write(&csv_path, render_csv(&rows))?;

    let compat = compat_rows(&records);
    let report = Report {
        rows,
        gsm8k_paper_compat: compat,
        tool_usage,
    };
    let json_path = dir.join(REPORT_JSON);
    let mut body = serde_json::to_string_pretty(&report).expect("report serializes");
    body.push('\n');
    fs::write(&json_path, body)?;

    let plots = write_plots(dir, &report)?;
    Ok(ReportFiles {
        csv: csv_path,
        json: json_path,
        plots,
    })
}

/// Group records as (benchmark, runner, temperature), ordered exactly as the
/// CSV must be.
fn grouped(records: &[ResultRecord]) -> BTreeMap<(String, String, u64), Vec<&ResultRecord>> {
    let mut groups: BTreeMap<(String, String, u64), Vec<&ResultRecord>> = BTreeMap::new();
    for record in records {
        let key = (
            record.benchmark.as_str().to_string(),
            record.runner.clone(),
            record.temperature.to_bits(),
        );
        groups.entry(key).or_default().push(record);
    }
    groups
}

fn per_run_aggregates(records: &[&ResultRecord]) -> Vec<RunAggregate> {
    let mut by_run: BTreeMap<u32, Vec<&ResultRecord>> = BTreeMap::new();
    for record in records {
        by_run.entry(record.run_index).or_default().push(record);
    }
    by_run
        .values()
        .map(|run| {
            let grades: Vec<Grade> = run.iter().map(|r| r.grade).collect();
            let costs: Vec<u64> = run.iter().map(|r| r.prompt_count).collect();
            let agg = aggregate(&grades, &costs);
            agg.assert_accounting();
            agg
        })
        .collect()
}

fn rounded(mut agg: RunAggregate) -> RunAggregate {
    agg.total = round2(agg.total);
    agg.graded = round2(agg.graded);
    agg.correct = round2(agg.correct);
    agg.hallucinated = round2(agg.hallucinated);
    agg.abstained = round2(agg.abstained);
    agg.invalid = round2(agg.invalid);
    agg.accuracy = round2(agg.accuracy);
    agg.avg_cost = round2(agg.avg_cost);
    agg
}

fn build_rows(records: &[ResultRecord]) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    for ((benchmark, runner, temp_bits), group) in grouped(records) {
        let per_run = per_run_aggregates(&group);
        let mean = average_runs(&per_run);
        mean.assert_accounting();

        let ledger_rows: Vec<&Vec<bool>> = group
            .iter()
            .filter(|r| !r.samples_correct.is_empty())
            .map(|r| &r.samples_correct)
            .collect();
        let (top_n, sample_histogram) = match ledger_rows.first() {
            Some(first) if ledger_rows.iter().all(|row| row.len() == first.len()) => {
                let borrowed: Vec<&[bool]> =
                    ledger_rows.iter().map(|row| row.as_slice()).collect();
                let ledger = SampleLedger::from_rows(first.len(), &borrowed)
                    .expect("uniform sample rows");
                (
                    top_n_accuracy(&ledger).into_iter().map(round2).collect(),
                    occurrence_histogram(&ledger),
                )
            }
            _ => (Vec::new(), Vec::new()),
        };

        let subjects = per_subject(
            group
                .iter()
                .filter_map(|r| r.subject.as_deref().map(|s| (s, r.grade))),
        )
        .into_iter()
        .map(|(subject, mut stat)| {
            stat.accuracy = round2(stat.accuracy);
            (subject, stat)
        })
        .collect();

        let mut abstain_reasons: BTreeMap<String, u64> = BTreeMap::new();
        for record in &group {
            if let StrategyOutcome::Abstained { reason } = &record.outcome {
                *abstain_reasons.entry(reason.as_str().to_string()).or_default() += 1;
            }
        }

        rows.push(ReportRow {
            benchmark,
            strategy: runner,
            temperature: f64::from_bits(temp_bits),
            runs: per_run.len(),
            mean: rounded(mean),
            per_run: per_run.into_iter().map(rounded).collect(),
            top_n,
            sample_histogram,
            subjects,
            abstain_reasons,
        });
    }
    rows
}

/// Restate a run with invalid replies graded as hallucinations, the
/// convention some published math-benchmark numbers use.
fn fold_invalid(mut agg: RunAggregate) -> RunAggregate {
    agg.graded += agg.invalid;
    agg.hallucinated += agg.invalid;
    agg.invalid = 0.0;
    agg.accuracy = if agg.graded == 0.0 { 0.0 } else { 100.0 * agg.correct / agg.graded };
    agg
}

fn compat_rows(records: &[ResultRecord]) -> Vec<CompatRow> {
    let gsm8k: Vec<ResultRecord> = records
        .iter()
        .filter(|r| r.benchmark.as_str() == "gsm8k")
        .cloned()
        .collect();
    let mut rows = Vec::new();
    for ((benchmark, runner, temp_bits), group) in grouped(&gsm8k) {
        let per_run: Vec<RunAggregate> =
            per_run_aggregates(&group).into_iter().map(fold_invalid).collect();
        let mean = average_runs(&per_run);
        mean.assert_accounting();
        rows.push(CompatRow {
            benchmark,
            strategy: runner,
            temperature: f64::from_bits(temp_bits),
            runs: per_run.len(),
            mean: rounded(mean),
            per_run: per_run.into_iter().map(rounded).collect(),
        });
    }
    rows
}

/// Merge tool tallies from the trace log, keyed by architecture. Duplicate
/// (cell, query) trace lines from interrupted cells count once.
fn tool_usage(dir: &Path) -> BTreeMap<String, ToolTally> {
    let file = match File::open(dir.join(TRACES_FILE)) {
        Ok(f) => f,
        Err(_) => return BTreeMap::new(),
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut usage: BTreeMap<String, ToolTally> = BTreeMap::new();
    for line in BufReader::new(file).lines() {
        let Ok(line) = line else { break };
        if line.trim().is_empty() {
            continue;
        }
        let Ok(trace) = serde_json::from_str::<TraceRecord>(&line) else { continue };
        if !seen.insert((trace.cell.clone(), trace.query_id.clone())) {
            continue;
        }
        let tally = usage.entry(trace.architecture.as_str().to_string()).or_default();
        merge_tool_tallies(tally, &trace.tool_stats);
    }
    usage
}

fn render_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let m = &row.mean;
        out.push_str(&format!(
            "{},{},{:.2},{},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2}\n",
            row.benchmark,
            row.strategy,
            row.temperature,
            row.runs,
            m.total,
            m.avg_cost,
            m.graded,
            m.hallucinated,
            m.correct,
            m.abstained,
            m.invalid,
            m.accuracy,
        ));
    }
    out
}

fn write_plots(dir: &Path, report: &Report) -> Result<Vec<PathBuf>, ReportError> {
    let plots_dir = dir.join(PLOTS_DIR);
    fs::create_dir_all(&plots_dir)?;
    let mut written = Vec::new();

    let mut top_n = String::from("benchmark\tstrategy\ttemperature\tn\taccuracy\n");
    for row in &report.rows {
        for (i, value) in row.top_n.iter().enumerate() {
            top_n.push_str(&format!(
                "{}\t{}\t{:.2}\t{}\t{:.2}\n",
                row.benchmark,
                row.strategy,
                row.temperature,
                i + 1,
                value
            ));
        }
    }
    written.push(write_plot(&plots_dir, "top_n.tsv", &top_n)?);

    let mut histogram = String::from("benchmark\tstrategy\ttemperature\tcorrect_samples\tqueries\n");
    for row in &report.rows {
        for (bucket, count) in row.sample_histogram.iter().enumerate() {
            histogram.push_str(&format!(
                "{}\t{}\t{:.2}\t{}\t{}\n",
                row.benchmark, row.strategy, row.temperature, bucket, count
            ));
        }
    }
    written.push(write_plot(&plots_dir, "histogram.tsv", &histogram)?);

    let mut subjects = String::from("benchmark\tstrategy\ttemperature\tsubject\tgraded\tcorrect\taccuracy\n");
    for row in &report.rows {
        for (subject, stat) in &row.subjects {
            subjects.push_str(&format!(
                "{}\t{}\t{:.2}\t{}\t{}\t{}\t{:.2}\n",
                row.benchmark,
                row.strategy,
                row.temperature,
                subject,
                stat.graded,
                stat.correct,
                stat.accuracy
            ));
        }
    }
    written.push(write_plot(&plots_dir, "subjects.tsv", &subjects)?);

    let mut tools = String::from("architecture\ttool\tsuccessful\tunsuccessful\n");
    for (architecture, tally) in &report.tool_usage {
        for (tool, counts) in tally {
            tools.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                architecture, tool, counts.successful, counts.unsuccessful
            ));
        }
    }
    written.push(write_plot(&plots_dir, "tool_usage.tsv", &tools)?);

    Ok(written)
}

fn write_plot(plots_dir: &Path, name: &str, body: &str) -> Result<PathBuf, ReportError> {
    let path = plots_dir.join(name);
    fs::write(&path, body)?;
    Ok(path)
}
