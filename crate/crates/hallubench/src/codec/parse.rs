//! Parsing model replies via the marker convention.
//!
//! Replies are expected to end with a line of the form `FINAL ANSWER: <value>`
//! (case-insensitive; the last occurrence wins). Reasoning replies additionally
//! carry `STEP k:` lines collected in document order.

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::numeric::canonical_numeric;

/// Default number of extra re-ask attempts after a parse failure.
pub const DEFAULT_TOLERANCE: u32 = 3;

/// What shape of answer to extract from a reply.
#[derive(Debug, Clone, PartialEq)]
pub enum ParseKind {
    Numeric,
    FreeText,
    Choice(Vec<String>),
    ReasoningPlus(Box<ParseKind>),
}

/// Parsing rules for one prompt: the expected answer kind and how many extra
/// attempts a re-ask loop may spend.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseSpec {
    pub kind: ParseKind,
    pub tolerance: u32,
}

impl ParseSpec {
    pub fn numeric() -> Self {
        ParseSpec { kind: ParseKind::Numeric, tolerance: DEFAULT_TOLERANCE }
    }

    pub fn freetext() -> Self {
        ParseSpec { kind: ParseKind::FreeText, tolerance: DEFAULT_TOLERANCE }
    }

    /// Multiple-choice over the given labels. Requires at least two labels.
    pub fn choice<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert!(labels.len() >= 2, "choice spec requires at least 2 option labels");
        ParseSpec { kind: ParseKind::Choice(labels), tolerance: DEFAULT_TOLERANCE }
    }

    /// Numeric answer that must be accompanied by `STEP k:` reasoning lines.
    pub fn reasoning_numeric() -> Self {
        ParseSpec {
            kind: ParseKind::ReasoningPlus(Box::new(ParseKind::Numeric)),
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tolerance: u32) -> Self {
        self.tolerance = tolerance;
        self
    }
}

/// The extracted answer value in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerValue {
    Numeric(String),
    Text(String),
    Choice(String),
}

/// A successfully parsed reply: the canonical value plus any reasoning steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedAnswer {
    pub value: AnswerValue,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasoning_steps: Vec<String>,
}

impl ParsedAnswer {
    /// The canonical comparison string for voting and grading.
    pub fn canonical(&self) -> &str {
        match &self.value {
            AnswerValue::Numeric(s) | AnswerValue::Text(s) | AnswerValue::Choice(s) => s,
        }
    }

    /// Re-serializes the answer in the marker convention. Parsing the output
    /// with the original spec reproduces the same `ParsedAnswer`.
    pub fn to_marker_text(&self) -> String {
        let mut out = String::new();
        for (i, step) in self.reasoning_steps.iter().enumerate() {
            out.push_str(&format!("STEP {}: {}\n", i + 1, step));
        }
        out.push_str(&format!("FINAL ANSWER: {}", self.canonical()));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseFailure {
    #[error("no FINAL ANSWER marker found")]
    MissingMarker,
    #[error("final answer value is empty")]
    EmptyValue,
    #[error("'{0}' is not a plain number")]
    NotNumeric(String),
    #[error("'{0}' is not one of the offered option labels")]
    LabelNotInOptions(String),
    #[error("no STEP lines found where reasoning was required")]
    MissingSteps,
}

fn marker_re() -> &'static Regex {
    static RE: std::sync::OnceLock<Regex> = std::sync::OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)final\s+answer\s*:").unwrap())
}

fn step_re() -> &'static Regex {
    static RE: std::sync::OnceLock<Regex> = std::sync::OnceLock::new();
    RE.get_or_init(|| Regex::new(r"(?i)\bstep\s+(\d+)\s*:\s*([^\n\r]*)").unwrap())
}

/// Extracts the value after the last `FINAL ANSWER:` marker, to end of line.
fn final_marker_value(raw: &str) -> Option<&str> {
    let m = marker_re().find_iter(raw).last()?;
    let rest = &raw[m.end()..];
    let line = rest.split(['\n', '\r']).next().unwrap_or("");
    Some(line.trim())
}

/// `STEP k:` lines in document order.
pub fn reasoning_steps(raw: &str) -> Vec<String> {
    step_re()
        .captures_iter(raw)
        .map(|c| c[2].trim().to_string())
        .collect()
}

fn match_choice(value: &str, labels: &[String]) -> Option<String> {
    let mut v = value.trim();
    v = v.trim_matches(|c: char| matches!(c, '(' | ')' | '[' | ']' | '"' | '\'' | '.' | ',' | ':' | ';' | '!' | '*'));
    let lower = v.to_ascii_lowercase();
    if let Some(stripped) = lower.strip_prefix("option ") {
        v = &v[v.len() - stripped.len()..];
    }
    labels
        .iter()
        .find(|l| l.eq_ignore_ascii_case(v.trim()))
        .cloned()
}

fn parse_value(value: &str, kind: &ParseKind) -> Result<AnswerValue, ParseFailure> {
    match kind {
        ParseKind::Numeric => canonical_numeric(value)
            .map(AnswerValue::Numeric)
            .ok_or_else(|| ParseFailure::NotNumeric(value.to_string())),
        ParseKind::FreeText => {
            let collapsed = value.split_whitespace().collect::<Vec<_>>().join(" ");
            if collapsed.is_empty() {
                Err(ParseFailure::EmptyValue)
            } else {
                Ok(AnswerValue::Text(collapsed))
            }
        }
        ParseKind::Choice(labels) => match_choice(value, labels)
            .map(AnswerValue::Choice)
            .ok_or_else(|| ParseFailure::LabelNotInOptions(value.to_string())),
        ParseKind::ReasoningPlus(inner) => parse_value(value, inner),
    }
}

/// Parses a raw model reply against a spec.
pub fn parse(raw: &str, spec: &ParseSpec) -> Result<ParsedAnswer, ParseFailure> {
    let value = final_marker_value(raw).ok_or(ParseFailure::MissingMarker)?;
    if value.is_empty() {
        return Err(ParseFailure::EmptyValue);
    }
    let parsed_value = parse_value(value, &spec.kind)?;
    let reasoning = if let ParseKind::ReasoningPlus(_) = spec.kind {
        let steps = reasoning_steps(raw);
        if steps.is_empty() {
            return Err(ParseFailure::MissingSteps);
        }
        steps
    } else {
        Vec::new()
    };
    Ok(ParsedAnswer { value: parsed_value, reasoning_steps: reasoning })
}
