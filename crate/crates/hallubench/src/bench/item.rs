//! Benchmark questions and their gold answers.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    Gsm8k,
    Triviaqa,
    Mmlu,
}

impl Benchmark {
    pub fn as_str(&self) -> &'static str {
        match self {
            Benchmark::Gsm8k => "gsm8k",
            Benchmark::Triviaqa => "triviaqa",
            Benchmark::Mmlu => "mmlu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gsm8k" => Some(Benchmark::Gsm8k),
            "triviaqa" => Some(Benchmark::Triviaqa),
            "mmlu" => Some(Benchmark::Mmlu),
            _ => None,
        }
    }
}

impl std::fmt::Display for Benchmark {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceOption {
    pub label: String,
    pub text: String,
}

/// What counts as correct, per benchmark family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoldAnswer {
    /// Canonical decimal string (exact match after canonicalization).
    Numeric(String),
    /// Normalized acceptable aliases (match after normalization).
    Aliases(BTreeSet<String>),
    /// The correct option label.
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkItem {
    pub id: String,
    pub benchmark: Benchmark,
    pub question: String,
    /// Present (exactly four, A–D) for multiple-choice items; empty otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub options: Vec<ChoiceOption>,
    pub gold: GoldAnswer,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
}

impl BenchmarkItem {
    pub fn validate(&self) -> Result<(), String> {
        match (self.benchmark, &self.gold) {
            (Benchmark::Gsm8k, GoldAnswer::Numeric(_)) => {
                if !self.options.is_empty() {
                    return Err(format!("{}: numeric items take no options", self.id));
                }
            }
            (Benchmark::Triviaqa, GoldAnswer::Aliases(aliases)) => {
                if aliases.is_empty() {
                    return Err(format!("{}: empty alias set", self.id));
                }
            }
            (Benchmark::Mmlu, GoldAnswer::Label(label)) => {
                if self.options.len() != 4 {
                    return Err(format!("{}: expected 4 options, got {}", self.id, self.options.len()));
                }
                if !self.options.iter().any(|o| &o.label == label) {
                    return Err(format!("{}: gold label '{label}' not among options", self.id));
                }
            }
            (benchmark, gold) => {
                return Err(format!("{}: gold kind {gold:?} does not fit {benchmark}", self.id))
            }
        }
        if self.question.trim().is_empty() {
            return Err(format!("{}: empty question", self.id));
        }
        Ok(())
    }

    /// "A) text" lines for prompt injection.
    pub fn options_block(&self) -> String {
        self.options
            .iter()
            .map(|o| format!("{}) {}", o.label, o.text))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn option_labels(&self) -> Vec<String> {
        self.options.iter().map(|o| o.label.clone()).collect()
    }
}

/// Convenience constructors used by fixtures and tests.
impl BenchmarkItem {
    pub fn numeric(id: &str, question: &str, gold: &str) -> Self {
        BenchmarkItem {
            id: id.into(),
            benchmark: Benchmark::Gsm8k,
            question: question.into(),
            options: Vec::new(),
            gold: GoldAnswer::Numeric(gold.into()),
            subject: None,
        }
    }

    pub fn trivia(id: &str, question: &str, aliases: &[&str]) -> Self {
        BenchmarkItem {
            id: id.into(),
            benchmark: Benchmark::Triviaqa,
            question: question.into(),
            options: Vec::new(),
            gold: GoldAnswer::Aliases(
                aliases.iter().map(|a| super::grade::normalize_trivia(a)).collect(),
            ),
            subject: None,
        }
    }

    pub fn choice(id: &str, question: &str, options: [&str; 4], gold_label: &str, subject: &str) -> Self {
        BenchmarkItem {
            id: id.into(),
            benchmark: Benchmark::Mmlu,
            question: question.into(),
            options: ["A", "B", "C", "D"]
                .iter()
                .zip(options)
                .map(|(label, text)| ChoiceOption { label: label.to_string(), text: text.into() })
                .collect(),
            gold: GoldAnswer::Label(gold_label.into()),
            subject: Some(subject.into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_enforces_per_benchmark_shape() {
        assert!(BenchmarkItem::numeric("g1", "1+1?", "2").validate().is_ok());
        assert!(BenchmarkItem::trivia("t1", "?", &["kelp"]).validate().is_ok());
        let mmlu = BenchmarkItem::choice("m1", "?", ["w", "x", "y", "z"], "B", "botany");
        assert!(mmlu.validate().is_ok());

        let mut bad = mmlu.clone();
        bad.gold = GoldAnswer::Label("E".into());
        assert!(bad.validate().is_err());

        let mut short = mmlu;
        short.options.pop();
        assert!(short.validate().is_err());

        let mut empty_alias = BenchmarkItem::trivia("t2", "?", &["kelp"]);
        empty_alias.gold = GoldAnswer::Aliases(Default::default());
        assert!(empty_alias.validate().is_err());
    }

    #[test]
    fn options_block_formats_labels() {
        let item = BenchmarkItem::choice("m1", "?", ["w", "x", "y", "z"], "A", "s");
        assert_eq!(item.options_block(), "A) w\nB) x\nC) y\nD) z");
        assert_eq!(item.option_labels(), vec!["A", "B", "C", "D"]);
    }
}
