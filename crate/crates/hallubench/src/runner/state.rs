//! Persistence for runs: per-query result records, resume bookkeeping, and
//! the append-only JSONL writers shared by worker threads.

use std::collections::BTreeSet;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::bench::{Benchmark, Grade};
use crate::strategy::StrategyOutcome;

pub const RESULTS_FILE: &str = "results.jsonl";
pub const TRACES_FILE: &str = "traces.jsonl";
pub const TRANSCRIPTS_FILE: &str = "transcripts.jsonl";
pub const STATE_FILE: &str = "state.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunnerKind {
    Strategy,
    Agent,
}

/// Everything the reporting stage needs about one graded query, so reports
/// can be rebuilt without the dataset files or transcripts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub benchmark: Benchmark,
    pub runner: String,
    pub kind: RunnerKind,
    pub temperature: f64,
    pub run_index: u32,
    pub query_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub outcome: StrategyOutcome,
    pub grade: Grade,
    pub prompt_count: u64,
    /// Per-sample correctness for sampling strategies; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples_correct: Vec<bool>,
}

impl ResultRecord {
    pub fn cell_key(&self) -> String {
        format!(
            "{}|{}|{}|{}",
            self.benchmark.as_str(),
            self.runner,
            self.temperature,
            self.run_index
        )
    }

    pub fn dedupe_key(&self) -> (String, String) {
        (self.cell_key(), self.query_id.clone())
    }
}

/// Resume marker: which plan produced the directory and which cells finished
/// cleanly. Rewritten atomically after every completed cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunState {
    pub plan_hash: String,
    #[serde(default)]
    pub completed_cells: BTreeSet<String>,
}

impl RunState {
    pub fn new(plan_hash: impl Into<String>) -> Self {
        RunState {
            plan_hash: plan_hash.into(),
            completed_cells: BTreeSet::new(),
        }
    }

    /// Read the marker if present; a missing or unparseable file counts as no
    /// state (completed work is still recovered from the results log).
    pub fn load(dir: &Path) -> Option<RunState> {
        let text = fs::read_to_string(dir.join(STATE_FILE)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Write-then-rename so a crash mid-save never leaves a torn marker.
    pub fn save(&self, dir: &Path) -> std::io::Result<()> {
        let body = serde_json::to_string_pretty(self).expect("state serializes");
        let tmp = dir.join("state.json.tmp");
        fs::write(&tmp, body)?;
        fs::rename(&tmp, dir.join(STATE_FILE))
    }
}

/// Load every parseable result line. Lines that fail to parse (for example a
/// tail truncated by a kill) are skipped, not fatal.
pub fn load_results(dir: &Path) -> Vec<ResultRecord> {
    let file = match File::open(dir.join(RESULTS_FILE)) {
        Ok(f) => f,
        Err(_) => return Vec::new(),
    };
    let mut records = Vec::new();
    for line in BufReader::new(file).lines() {
        let Ok(line) = line else { break };
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(record) = serde_json::from_str::<ResultRecord>(&line) {
            records.push(record);
        }
    }
    records
}

/// Keep the first record per (cell, query); reruns of an interrupted cell may
/// append duplicates and the earliest write wins.
pub fn dedupe_keep_first(records: Vec<ResultRecord>) -> Vec<ResultRecord> {
    let mut seen = BTreeSet::new();
    records
        .into_iter()
        .filter(|r| seen.insert(r.dedupe_key()))
        .collect()
}

/// Append-only JSONL writer: one serialized value per line, flushed eagerly
/// so a killed run loses at most the line in flight.
pub struct JsonlAppender {
    inner: Mutex<BufWriter<File>>,
}

impl JsonlAppender {
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(JsonlAppender {
            inner: Mutex::new(BufWriter::new(file)),
        })
    }

    pub fn append<T: Serialize>(&self, value: &T) -> std::io::Result<()> {
        let line = serde_json::to_string(value).expect("record serializes");
        let mut writer = self.inner.lock().expect("appender lock");
        writeln!(writer, "{line}")?;
        writer.flush()
    }
}
