//! What a strategy run produces.

use serde::{Deserialize, Serialize};

use crate::codec::ParsedAnswer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbstainReason {
    /// Sampled answers disagreed (consistent-probing gate).
    Contradiction,
    /// A verification step rejected the initial answer.
    VerificationFailed,
    /// The knowledge graph could not supply a usable entity or property.
    KgUnresolvable,
}

impl AbstainReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            AbstainReason::Contradiction => "contradiction",
            AbstainReason::VerificationFailed => "verification_failed",
            AbstainReason::KgUnresolvable => "kg_unresolvable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StrategyOutcome {
    Answered { value: ParsedAnswer },
    Abstained { reason: AbstainReason },
    Invalid,
}

impl StrategyOutcome {
    pub fn answered(value: ParsedAnswer) -> Self {
        StrategyOutcome::Answered { value }
    }

    pub fn abstained(reason: AbstainReason) -> Self {
        StrategyOutcome::Abstained { reason }
    }

    pub fn answer(&self) -> Option<&ParsedAnswer> {
        match self {
            StrategyOutcome::Answered { value } => Some(value),
            _ => None,
        }
    }
}

/// One sampled sub-answer: parsed, or the parse-failure text.
pub type SampleOutcome = Result<ParsedAnswer, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyResult {
    pub outcome: StrategyOutcome,
    /// Gateway calls actually made — the per-query cost numerator.
    pub prompt_count: u64,
    /// Raw per-sample results where sampling occurred (sc/sc_cot/tot/cp).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<SampleOutcome>,
    pub transcript_id: String,
}
