//! Deterministic answer grading.

use serde::{Deserialize, Serialize};

use crate::codec::ParsedAnswer;
use crate::strategy::{SampleOutcome, StrategyOutcome};

use super::item::{BenchmarkItem, GoldAnswer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grade {
    Correct,
    Hallucinated,
    Abstained,
    Invalid,
}

/// Trivia normalization: lowercase, strip ASCII punctuation, drop the
/// article words a/an/the, collapse whitespace.
pub fn normalize_trivia(raw: &str) -> String {
    let lowered = raw.to_lowercase();
    let stripped: String = lowered.chars().filter(|c| !c.is_ascii_punctuation()).collect();
    stripped
        .split_whitespace()
        .filter(|word| !matches!(*word, "a" | "an" | "the"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Would this parsed answer grade Correct on this item?
pub fn answered_correct(item: &BenchmarkItem, answer: &ParsedAnswer) -> bool {
    match &item.gold {
        GoldAnswer::Numeric(gold) => answer.canonical() == gold,
        GoldAnswer::Aliases(aliases) => aliases.contains(&normalize_trivia(answer.canonical())),
        GoldAnswer::Label(gold) => answer.canonical() == gold,
    }
}

/// Answered outcomes grade Correct or Hallucinated; abstentions and
/// invalid runs pass through unchanged.
pub fn grade(item: &BenchmarkItem, outcome: &StrategyOutcome) -> Grade {
    match outcome {
        StrategyOutcome::Answered { value } => {
            if answered_correct(item, value) {
                Grade::Correct
            } else {
                Grade::Hallucinated
            }
        }
        StrategyOutcome::Abstained { .. } => Grade::Abstained,
        StrategyOutcome::Invalid => Grade::Invalid,
    }
}

/// Per-sample correctness for ledgers; failed samples count as incorrect.
pub fn sample_correct(item: &BenchmarkItem, sample: &SampleOutcome) -> bool {
    match sample {
        Ok(answer) => answered_correct(item, answer),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::AnswerValue;
    use crate::strategy::AbstainReason;

    fn answered(value: AnswerValue) -> StrategyOutcome {
        StrategyOutcome::answered(ParsedAnswer { value, reasoning_steps: vec![] })
    }

    #[test]
    fn normalization_handles_case_punctuation_articles() {
        assert_eq!(normalize_trivia("Kelp."), "kelp");
        assert_eq!(normalize_trivia("The Giant Kelp!"), "giant kelp");
        assert_eq!(normalize_trivia("  a  an the "), "");
        assert_eq!(normalize_trivia("Hitchhiker's Guide"), "hitchhikers guide");
        assert_eq!(normalize_trivia("o'clock, maybe?"), "oclock maybe");
    }

    #[test]
    fn trivia_grades_through_alias_set() {
        let item = BenchmarkItem::trivia("t", "seaweed farmed for alginates?", &["Kelp", "Giant kelp"]);
        assert_eq!(grade(&item, &answered(AnswerValue::Text("Kelp.".into()))), Grade::Correct);
        assert_eq!(
            grade(&item, &answered(AnswerValue::Text("the giant kelp".into()))),
            Grade::Correct
        );
        assert_eq!(
            grade(&item, &answered(AnswerValue::Text("dulse".into()))),
            Grade::Hallucinated
        );
    }

    #[test]
    fn numeric_and_label_grades_are_exact() {
        let gsm = BenchmarkItem::numeric("g", "?", "72");
        assert_eq!(grade(&gsm, &answered(AnswerValue::Numeric("72".into()))), Grade::Correct);
        assert_eq!(grade(&gsm, &answered(AnswerValue::Numeric("71".into()))), Grade::Hallucinated);

        let mmlu = BenchmarkItem::choice("m", "?", ["w", "x", "y", "z"], "B", "s");
        assert_eq!(grade(&mmlu, &answered(AnswerValue::Choice("B".into()))), Grade::Correct);
        assert_eq!(grade(&mmlu, &answered(AnswerValue::Choice("C".into()))), Grade::Hallucinated);
    }

    #[test]
    fn non_answers_pass_through() {
        let item = BenchmarkItem::numeric("g", "?", "72");
        assert_eq!(
            grade(&item, &StrategyOutcome::abstained(AbstainReason::Contradiction)),
            Grade::Abstained
        );
        assert_eq!(grade(&item, &StrategyOutcome::Invalid), Grade::Invalid);
    }

    #[test]
    fn failed_samples_are_incorrect() {
        let item = BenchmarkItem::numeric("g", "?", "72");
        assert!(!sample_correct(&item, &Err("no marker".into())));
        let ok = ParsedAnswer { value: AnswerValue::Numeric("72".into()), reasoning_steps: vec![] };
        assert!(sample_correct(&item, &Ok(ok)));
    }
}
