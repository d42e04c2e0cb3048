//! Name-keyed tool registry with invoke-time validation.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;

use super::spec::{ToolCall, ToolErrorKind, ToolResult, ToolSpec};

/// A callable capability. Implementations must never panic on bad input;
/// every failure is a [`ToolResult`] the agent can observe.
pub trait Tool: Send + Sync {
    fn spec(&self) -> ToolSpec;
    fn invoke(&self, arguments: &Value) -> ToolResult;
}

/// Pulls a required string argument, or produces the bad-arguments result
/// the tool should return verbatim.
pub fn string_arg(arguments: &Value, name: &str) -> Result<String, ToolResult> {
    match arguments.get(name).and_then(Value::as_str) {
        Some(s) if !s.trim().is_empty() => Ok(s.to_string()),
        Some(_) => Err(ToolResult::failure(
            ToolErrorKind::BadArguments,
            format!("argument '{name}' must be non-empty"),
        )),
        None => Err(ToolResult::failure(
            ToolErrorKind::BadArguments,
            format!("missing required string argument '{name}'"),
        )),
    }
}

/// Immutable-after-construction set of tools, shareable across agents.
#[derive(Default, Clone)]
pub struct ToolRegistry {
    tools: BTreeMap<String, Arc<dyn Tool>>,
}

impl ToolRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, tool: Arc<dyn Tool>) {
        self.tools.insert(tool.spec().name, tool);
    }

    pub fn contains(&self, name: &str) -> bool {
        self.tools.contains_key(name)
    }

    pub fn names(&self) -> Vec<String> {
        self.tools.keys().cloned().collect()
    }

    /// Specs for the named subset, in the order given.
    pub fn specs_for(&self, names: &[String]) -> Result<Vec<ToolSpec>, String> {
        names
            .iter()
            .map(|name| {
                self.tools
                    .get(name)
                    .map(|t| t.spec())
                    .ok_or_else(|| name.clone())
            })
            .collect()
    }

    /// Execute a call. Unknown tool names are data, not errors: the result
    /// reports them so the agent's stats can tally the literal name.
    pub fn invoke(&self, call: &ToolCall) -> ToolResult {
        match self.tools.get(&call.name) {
            Some(tool) => tool.invoke(&call.arguments),
            None => ToolResult::failure(
                ToolErrorKind::UnknownTool,
                format!("unknown tool '{}'", call.name),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    struct Echo;
    impl Tool for Echo {
        fn spec(&self) -> ToolSpec {
            ToolSpec::single_string_param("echo", "repeats its input", "text", "what to repeat")
        }
        fn invoke(&self, arguments: &Value) -> ToolResult {
            match string_arg(arguments, "text") {
                Ok(text) => ToolResult::success(text),
                Err(result) => result,
            }
        }
    }

    #[test]
    fn registry_routes_and_reports_unknowns() {
        let mut registry = ToolRegistry::new();
        registry.insert(Arc::new(Echo));

        let ok = registry.invoke(&ToolCall { name: "echo".into(), arguments: json!({"text":"hi"}) });
        assert!(ok.ok);
        assert_eq!(ok.content, "hi");

        let missing = registry.invoke(&ToolCall { name: "echo".into(), arguments: json!({}) });
        assert_eq!(missing.error_kind, Some(ToolErrorKind::BadArguments));

        let unknown =
            registry.invoke(&ToolCall { name: "wikipediaa".into(), arguments: json!({}) });
        assert_eq!(unknown.error_kind, Some(ToolErrorKind::UnknownTool));
        assert!(unknown.content.contains("wikipediaa"));
    }

    #[test]
    fn specs_for_preserves_order_and_flags_gaps() {
        let mut registry = ToolRegistry::new();
        registry.insert(Arc::new(Echo));
        let specs = registry.specs_for(&["echo".into()]).unwrap();
        assert_eq!(specs.len(), 1);
        assert_eq!(registry.specs_for(&["nope".into()]).unwrap_err(), "nope");
    }
}
