//! File loaders for the three supported benchmark formats.
//!
//! * GSM8K: JSON-lines, one `{"question", "answer"}` object per line, the gold
//!   number on the final `#### ` marker of the answer text.
//! * TriviaQA: the validation-split JSON file, `{"Data": [...]}` with per-item
//!   alias lists.
//! * MMLU: a directory of headerless `<subject>_test.csv` files with exactly
//!   six columns: question, four option texts, and the gold letter.

use std::collections::BTreeSet;
use std::fs;
use std::io::BufRead;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::grade::normalize_trivia;
use super::item::{Benchmark, BenchmarkItem, ChoiceOption, GoldAnswer};
use crate::codec::canonical_numeric;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {detail}")]
    Format { path: PathBuf, line: usize, detail: String },
    #[error("no *_test.csv files found under {path}")]
    NoSubjects { path: PathBuf },
}

impl LoadError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        LoadError::Io { path: path.to_path_buf(), source }
    }

    fn format(path: &Path, line: usize, detail: impl Into<String>) -> Self {
        LoadError::Format { path: path.to_path_buf(), line, detail: detail.into() }
    }
}

/// Loads `path` as `benchmark`, keeping at most `limit` items.
///
/// GSM8K and TriviaQA take the first `limit` items in file order; MMLU spreads
/// the budget across subjects (see [`load_mmlu`]).
pub fn load_benchmark(
    benchmark: Benchmark,
    path: &Path,
    limit: Option<usize>,
) -> Result<Vec<BenchmarkItem>, LoadError> {
    match benchmark {
        Benchmark::Gsm8k => load_gsm8k(path, limit),
        Benchmark::Triviaqa => load_triviaqa(path, limit),
        Benchmark::Mmlu => load_mmlu(path, limit),
    }
}

#[derive(Deserialize)]
struct Gsm8kRow {
    question: String,
    answer: String,
}

pub fn load_gsm8k(path: &Path, limit: Option<usize>) -> Result<Vec<BenchmarkItem>, LoadError> {
    let file = fs::File::open(path).map_err(|e| LoadError::io(path, e))?;
    let mut items = Vec::new();
    for (idx, line) in std::io::BufReader::new(file).lines().enumerate() {
        if limit.is_some_and(|n| items.len() >= n) {
            break;
        }
        let line_no = idx + 1;
        let line = line.map_err(|e| LoadError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row: Gsm8kRow = serde_json::from_str(&line)
            .map_err(|e| LoadError::format(path, line_no, format!("bad JSON object: {e}")))?;
        let tail = row
            .answer
            .rfind("#### ")
            .map(|pos| row.answer[pos + 5..].trim())
            .ok_or_else(|| LoadError::format(path, line_no, "answer lacks a '#### ' gold marker"))?;
        let gold = canonical_numeric(tail).ok_or_else(|| {
            LoadError::format(path, line_no, format!("gold answer {tail:?} is not numeric"))
        })?;
        let item = BenchmarkItem::numeric(&format!("gsm8k-{:04}", items.len() + 1), &row.question, &gold);
        item.validate().map_err(|d| LoadError::format(path, line_no, d))?;
        items.push(item);
    }
    Ok(items)
}

#[derive(Deserialize)]
struct TriviaFile {
    #[serde(rename = "Data")]
    data: Vec<TriviaRow>,
}

#[derive(Deserialize)]
struct TriviaRow {
    #[serde(rename = "Question")]
    question: String,
    #[serde(rename = "QuestionId")]
    question_id: String,
    #[serde(rename = "Answer")]
    answer: TriviaAnswer,
}

#[derive(Deserialize)]
struct TriviaAnswer {
    #[serde(rename = "Value")]
    value: String,
    #[serde(rename = "Aliases", default)]
    aliases: Vec<String>,
    #[serde(rename = "NormalizedAliases", default)]
    normalized_aliases: Vec<String>,
}

pub fn load_triviaqa(path: &Path, limit: Option<usize>) -> Result<Vec<BenchmarkItem>, LoadError> {
    let text = fs::read_to_string(path).map_err(|e| LoadError::io(path, e))?;
    let file: TriviaFile = serde_json::from_str(&text)
        .map_err(|e| LoadError::format(path, 0, format!("bad TriviaQA JSON: {e}")))?;
    let mut items = Vec::new();
    for (idx, row) in file.data.into_iter().enumerate() {
        if limit.is_some_and(|n| items.len() >= n) {
            break;
        }
        let mut aliases: BTreeSet<String> = BTreeSet::new();
        for raw in std::iter::once(&row.answer.value)
            .chain(row.answer.aliases.iter())
            .chain(row.answer.normalized_aliases.iter())
        {
            let normalized = normalize_trivia(raw);
            if !normalized.is_empty() {
                aliases.insert(normalized);
            }
        }
        if aliases.is_empty() {
            return Err(LoadError::format(
                path,
                idx + 1,
                format!("question {:?} has no usable gold aliases", row.question_id),
            ));
        }
        let item = BenchmarkItem {
            id: row.question_id,
            benchmark: Benchmark::Triviaqa,
            question: row.question,
            options: Vec::new(),
            gold: GoldAnswer::Aliases(aliases),
            subject: None,
        };
        item.validate().map_err(|d| LoadError::format(path, idx + 1, d))?;
        items.push(item);
    }
    Ok(items)
}

/// Splits a per-run item budget evenly across `subjects` alphabetical subject
/// files: every subject contributes `ceil(target / subjects)` items except the
/// last few, which contribute one fewer so the total lands exactly on target.
pub fn subject_quotas(subjects: usize, target: usize) -> Vec<usize> {
    assert!(subjects > 0, "quota split needs at least one subject");
    let base = target.div_ceil(subjects);
    let trimmed = base * subjects - target;
    (0..subjects)
        .map(|i| if i < subjects - trimmed { base } else { base.saturating_sub(1) })
        .collect()
}

pub fn load_mmlu(dir: &Path, limit: Option<usize>) -> Result<Vec<BenchmarkItem>, LoadError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| LoadError::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| n.ends_with("_test.csv"))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(LoadError::NoSubjects { path: dir.to_path_buf() });
    }

    let quotas = match limit {
        Some(target) => subject_quotas(files.len(), target),
        None => vec![usize::MAX; files.len()],
    };

    let mut items = Vec::new();
    for (file, quota) in files.iter().zip(quotas) {
        let subject = file
            .file_stem()
            .and_then(|s| s.to_str())
            .map(|s| s.trim_end_matches("_test").to_string())
            .unwrap_or_default();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_path(file)
            .map_err(|e| LoadError::format(file, 0, e.to_string()))?;
        let mut taken = 0usize;
        for (idx, record) in reader.records().enumerate() {
            if taken >= quota {
                break;
            }
            let line_no = idx + 1;
            let record = record.map_err(|e| LoadError::format(file, line_no, e.to_string()))?;
            if record.len() != 6 {
                return Err(LoadError::format(
                    file,
                    line_no,
                    format!("expected 6 columns, found {}", record.len()),
                ));
            }
            let answer = record[5].trim();
            if !matches!(answer, "A" | "B" | "C" | "D") {
                return Err(LoadError::format(
                    file,
                    line_no,
                    format!("gold label {answer:?} is not one of A-D"),
                ));
            }
            let item = BenchmarkItem {
                id: format!("mmlu-{subject}-{line_no:04}"),
                benchmark: Benchmark::Mmlu,
                question: record[0].to_string(),
                options: ["A", "B", "C", "D"]
                    .iter()
                    .zip(1..=4)
                    .map(|(label, col)| ChoiceOption {
                        label: label.to_string(),
                        text: record[col].to_string(),
                    })
                    .collect(),
                gold: GoldAnswer::Label(answer.to_string()),
                subject: Some(subject.clone()),
            };
            item.validate().map_err(|d| LoadError::format(file, line_no, d))?;
            items.push(item);
            taken += 1;
        }
    }
    Ok(items)
}
