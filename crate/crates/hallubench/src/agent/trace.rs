//! Step-by-step records of agent executions.

use serde::{Deserialize, Serialize};

use crate::bench::{ToolCounts, ToolTally};
use crate::strategy::StrategyOutcome;
use crate::tools::ToolCall;

use super::config::Architecture;

/// One loop iteration: a thought, and — when the model acted — the tool
/// call paired with what came back. Error texts are observations too.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentStep {
    pub thought: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ToolCall>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observation: Option<String>,
}

impl AgentStep {
    pub fn thought(text: impl Into<String>) -> Self {
        AgentStep { thought: text.into(), action: None, observation: None }
    }

    pub fn action(call: ToolCall, observation: impl Into<String>) -> Self {
        AgentStep { thought: String::new(), action: Some(call), observation: Some(observation.into()) }
    }

    pub fn is_action(&self) -> bool {
        self.action.is_some()
    }

    /// A step has an action iff it has an observation.
    pub fn well_formed(&self) -> bool {
        self.action.is_some() == self.observation.is_some()
    }
}

/// Everything one agent execution produced. The final answer is either a
/// parsed value or Invalid; agents never abstain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentTrace {
    pub steps: Vec<AgentStep>,
    pub final_answer: StrategyOutcome,
    pub tool_stats: ToolTally,
    /// Gateway calls made — the agent's cost numerator.
    pub prompt_count: u64,
}

impl AgentTrace {
    pub fn record(&self, query_id: &str, architecture: Architecture) -> TraceRecord {
        TraceRecord {
            query_id: query_id.to_string(),
            architecture,
            cell: String::new(),
            steps: self.steps.clone(),
            tool_stats: self.tool_stats.clone(),
            final_answer: self.final_answer.clone(),
        }
    }
}

/// One line of the persisted traces file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub query_id: String,
    pub architecture: Architecture,
    /// Grid-cell key when written by the runner; distinguishes repeats of the
    /// same query across temperatures and runs.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub cell: String,
    pub steps: Vec<AgentStep>,
    pub tool_stats: ToolTally,
    #[serde(rename = "final")]
    pub final_answer: StrategyOutcome,
}

/// Count one call outcome under the tool's literal name (unknown names
/// included — those tally as unsuccessful calls of whatever was asked for).
pub fn tally(stats: &mut ToolTally, tool_name: &str, ok: bool) {
    let counts: &mut ToolCounts = stats.entry(tool_name.to_string()).or_default();
    if ok {
        counts.successful += 1;
    } else {
        counts.unsuccessful += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call() -> ToolCall {
        ToolCall { name: "exec_code".into(), arguments: serde_json::json!({"source": "print(5)"}) }
    }

    #[test]
    fn constructors_keep_action_observation_paired() {
        assert!(AgentStep::thought("t").well_formed());
        assert!(AgentStep::action(call(), "5").well_formed());
        let broken = AgentStep { thought: String::new(), action: Some(call()), observation: None };
        assert!(!broken.well_formed());
    }

    #[test]
    fn trace_record_serializes_with_final_key() {
        let trace = AgentTrace {
            steps: vec![AgentStep::action(call(), "5")],
            final_answer: StrategyOutcome::Invalid,
            tool_stats: ToolTally::new(),
            prompt_count: 2,
        };
        let json = serde_json::to_value(trace.record("gsm8k-0001", Architecture::React)).unwrap();
        assert_eq!(json["query_id"], "gsm8k-0001");
        assert_eq!(json["architecture"], "react");
        assert_eq!(json["final"]["status"], "invalid");
        assert_eq!(json["steps"][0]["action"]["name"], "exec_code");
        let back: TraceRecord = serde_json::from_value(json).unwrap();
        assert_eq!(back.final_answer, StrategyOutcome::Invalid);
    }

    #[test]
    fn tally_splits_success_from_failure() {
        let mut stats = ToolTally::new();
        tally(&mut stats, "web_search", true);
        tally(&mut stats, "web_search", false);
        tally(&mut stats, "wikipediaa", false);
        assert_eq!(stats["web_search"], ToolCounts { successful: 1, unsuccessful: 1 });
        assert_eq!(stats["wikipediaa"], ToolCounts { successful: 0, unsuccessful: 1 });
    }
}
