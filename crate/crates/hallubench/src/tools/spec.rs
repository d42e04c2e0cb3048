//! Tool descriptions, calls, and results.

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Declaration of a callable tool, serialized into tool-enabled requests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolSpec {
    pub name: String,
    pub description: String,
    /// JSON-schema-style object: {"type":"object","properties":{...},"required":[...]}.
    pub parameters: Value,
}

impl ToolSpec {
    pub fn new(name: &str, description: &str, parameters: Value) -> Self {
        assert!(!description.trim().is_empty(), "tool description must be non-empty");
        ToolSpec { name: name.into(), description: description.into(), parameters }
    }

    /// Convenience schema: a single required string parameter.
    pub fn single_string_param(name: &str, description: &str, param: &str, param_desc: &str) -> Self {
        ToolSpec::new(
            name,
            description,
            serde_json::json!({
                "type": "object",
                "properties": { param: { "type": "string", "description": param_desc } },
                "required": [param],
            }),
        )
    }
}

/// A model-issued request to invoke a tool.
///
/// The name may reference an unknown tool: that is data, and the agent
/// runtime records such calls as unsuccessful rather than rejecting them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolCall {
    pub name: String,
    pub arguments: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToolErrorKind {
    UnknownTool,
    BadArguments,
    ExecutionError,
    Timeout,
    Network,
}

/// Outcome of one tool invocation; failures are values, never panics,
/// so agents receive errors as observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolResult {
    pub ok: bool,
    pub content: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_kind: Option<ToolErrorKind>,
}

impl ToolResult {
    pub fn success(content: impl Into<String>) -> Self {
        let content = content.into();
        let content = if content.is_empty() { "(empty output)".to_string() } else { content };
        ToolResult { ok: true, content, error_kind: None }
    }

    pub fn failure(kind: ToolErrorKind, content: impl Into<String>) -> Self {
        let content = content.into();
        let content = if content.is_empty() { "(no error detail)".to_string() } else { content };
        ToolResult { ok: false, content, error_kind: Some(kind) }
    }
}
