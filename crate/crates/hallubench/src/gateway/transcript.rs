//! Append-only JSONL record of every request/response pair.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use super::types::{CompletionRequest, CompletionResponse};

/// How `ts` is produced: a wall clock for live backends, a logical
/// counter for mocks so replays are byte-identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClockMode {
    Wall,
    Logical,
}

#[derive(Debug, Serialize)]
struct TranscriptLine<'a> {
    ts: u64,
    transcript_id: &'a str,
    backend: &'a str,
    request: &'a CompletionRequest,
    response: &'a CompletionResponse,
}

#[derive(Debug, Serialize)]
struct NoteLine<'a> {
    ts: u64,
    transcript_id: &'a str,
    backend: &'a str,
    note: &'a str,
}

enum Target {
    File(Mutex<BufWriter<File>>),
    Memory(Mutex<Vec<String>>),
    Disabled,
}

/// Thread-safe transcript writer; one line per exchange, flushed eagerly
/// so a killed run loses at most the line being written.
pub struct TranscriptSink {
    target: Target,
    clock: ClockMode,
    seq: AtomicU64,
}

impl TranscriptSink {
    pub fn to_file(path: &Path, clock: ClockMode) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(TranscriptSink {
            target: Target::File(Mutex::new(BufWriter::new(file))),
            clock,
            seq: AtomicU64::new(0),
        })
    }

    pub fn in_memory(clock: ClockMode) -> Self {
        TranscriptSink { target: Target::Memory(Mutex::new(Vec::new())), clock, seq: AtomicU64::new(0) }
    }

    pub fn disabled() -> Self {
        TranscriptSink { target: Target::Disabled, clock: ClockMode::Logical, seq: AtomicU64::new(0) }
    }

    fn now(&self) -> u64 {
        match self.clock {
            ClockMode::Logical => self.seq.fetch_add(1, Ordering::SeqCst),
            ClockMode::Wall => SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
        }
    }

    fn write_line(&self, line: String) {
        match &self.target {
            Target::File(file) => {
                let mut guard = file.lock().unwrap();
                let _ = writeln!(guard, "{line}");
                let _ = guard.flush();
            }
            Target::Memory(lines) => lines.lock().unwrap().push(line),
            Target::Disabled => {}
        }
    }

    pub fn record(
        &self,
        transcript_id: &str,
        backend: &str,
        request: &CompletionRequest,
        response: &CompletionResponse,
    ) {
        if matches!(self.target, Target::Disabled) {
            return;
        }
        let line = TranscriptLine { ts: self.now(), transcript_id, backend, request, response };
        self.write_line(serde_json::to_string(&line).expect("transcript line serializes"));
    }

    /// Out-of-band annotation, e.g. a strategy degrading after a tool failure.
    pub fn note(&self, transcript_id: &str, backend: &str, note: &str) {
        if matches!(self.target, Target::Disabled) {
            return;
        }
        let line = NoteLine { ts: self.now(), transcript_id, backend, note };
        self.write_line(serde_json::to_string(&line).expect("note line serializes"));
    }

    /// Captured lines (in-memory sinks only), parsed back to JSON.
    pub fn lines(&self) -> Vec<Value> {
        match &self.target {
            Target::Memory(lines) => lines
                .lock()
                .unwrap()
                .iter()
                .map(|l| serde_json::from_str(l).expect("recorded line parses"))
                .collect(),
            _ => Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::types::{ChatMessage, FinishReason};

    fn exchange() -> (CompletionRequest, CompletionResponse) {
        (
            CompletionRequest::new(vec![ChatMessage::user("q")], 0.2),
            CompletionResponse {
                content: "a".into(),
                finish_reason: FinishReason::Stop,
                usage: None,
            },
        )
    }

    #[test]
    fn logical_clock_counts_from_zero() {
        let sink = TranscriptSink::in_memory(ClockMode::Logical);
        let (req, resp) = exchange();
        sink.record("t1", "mock", &req, &resp);
        sink.note("t1", "mock", "degraded");
        sink.record("t1", "mock", &req, &resp);
        let lines = sink.lines();
        assert_eq!(lines.len(), 3);
        let ts: Vec<u64> = lines.iter().map(|l| l["ts"].as_u64().unwrap()).collect();
        assert_eq!(ts, vec![0, 1, 2]);
        assert_eq!(lines[1]["note"], "degraded");
        assert_eq!(lines[0]["transcript_id"], "t1");
    }

    #[test]
    fn file_sink_appends_parseable_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("transcripts.jsonl");
        let sink = TranscriptSink::to_file(&path, ClockMode::Logical).unwrap();
        let (req, resp) = exchange();
        sink.record("t1", "mock", &req, &resp);
        sink.record("t2", "mock", &req, &resp);
        drop(sink);
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        for line in lines {
            let v: Value = serde_json::from_str(line).unwrap();
            assert!(v["request"]["messages"].is_array());
            assert_eq!(v["response"]["content"], "a");
        }
    }

    #[test]
    fn disabled_sink_drops_everything() {
        let sink = TranscriptSink::disabled();
        let (req, resp) = exchange();
        sink.record("t1", "mock", &req, &resp);
        assert!(sink.lines().is_empty());
    }
}
