//! Request/response types shared by every backend.

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tools::ToolCall;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
    Tool,
}

/// One turn in a chat conversation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::System, content: content.into() }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::User, content: content.into() }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::Assistant, content: content.into() }
    }

    pub fn tool(content: impl Into<String>) -> Self {
        ChatMessage { role: Role::Tool, content: content.into() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RequestError {
    #[error("request has no messages")]
    EmptyMessages,
    #[error("message {0} has empty content")]
    EmptyContent(usize),
    #[error("request must end with a user or tool message")]
    BadFinalRole,
    #[error("temperature {0} outside [0, 2]")]
    TemperatureOutOfRange(String),
}

/// One chat-completion call: messages plus decoding parameters.
///
/// The seed, when present, doubles as the deterministic salt for the mock
/// backend and is forwarded on the wire for servers that honor it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

impl CompletionRequest {
    pub fn new(messages: Vec<ChatMessage>, temperature: f64) -> Self {
        CompletionRequest { messages, temperature, seed: None, max_tokens: None }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn validate(&self) -> Result<(), RequestError> {
        if self.messages.is_empty() {
            return Err(RequestError::EmptyMessages);
        }
        for (i, m) in self.messages.iter().enumerate() {
            if matches!(m.role, Role::User | Role::Assistant) && m.content.trim().is_empty() {
                return Err(RequestError::EmptyContent(i));
            }
        }
        let last = self.messages.last().unwrap();
        if !matches!(last.role, Role::User | Role::Tool) {
            return Err(RequestError::BadFinalRole);
        }
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(RequestError::TemperatureOutOfRange(self.temperature.to_string()));
        }
        Ok(())
    }

    /// All message contents joined together; what mock matchers scan.
    pub fn joined_text(&self) -> String {
        self.messages
            .iter()
            .map(|m| m.content.as_str())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FinishReason {
    Stop,
    Length,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

/// A backend's reply to [`CompletionRequest`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub content: String,
    pub finish_reason: FinishReason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usage: Option<TokenUsage>,
}

/// Reply to a tool-enabled request: either plain text or structured calls.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelReply {
    Text(String),
    ToolCalls(Vec<ToolCall>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    OpenaiHttp,
    OllamaHttp,
    Mock,
}

impl BackendKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BackendKind::OpenaiHttp => "openai_http",
            BackendKind::OllamaHttp => "ollama_http",
            BackendKind::Mock => "mock",
        }
    }
}

fn default_timeout_ms() -> u64 {
    60_000
}

fn default_max_retries() -> u32 {
    2
}

fn default_retry_backoff_ms() -> u64 {
    500
}

/// Where and how to reach a chat-completion backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    pub kind: BackendKind,
    /// Absent for the mock backend.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_url: Option<String>,
    pub model_name: String,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_retry_backoff_ms")]
    pub retry_backoff_ms: u64,
}

impl BackendConfig {
    pub fn mock() -> Self {
        BackendConfig {
            kind: BackendKind::Mock,
            base_url: None,
            model_name: "mock".into(),
            timeout_ms: default_timeout_ms(),
            max_retries: default_max_retries(),
            retry_backoff_ms: default_retry_backoff_ms(),
        }
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }

    pub fn retry_backoff(&self) -> Duration {
        Duration::from_millis(self.retry_backoff_ms)
    }

    pub fn validate(&self) -> Result<(), String> {
        match self.kind {
            BackendKind::Mock => {
                if self.base_url.is_some() {
                    return Err("mock backend takes no base_url".into());
                }
            }
            _ => {
                if self.base_url.as_deref().map_or(true, |u| u.trim().is_empty()) {
                    return Err(format!("backend kind {} requires base_url", self.kind.as_str()));
                }
            }
        }
        if self.timeout_ms == 0 {
            return Err("timeout must be positive".into());
        }
        Ok(())
    }
}

/// Failures surfaced by gateway calls. Transient HTTP trouble is retried
/// internally; these are what remains after retries are spent.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GatewayError {
    #[error("backend unreachable: {0}")]
    BackendUnreachable(String),
    #[error("malformed backend reply: {0}")]
    MalformedBackendReply(String),
    #[error("context overflow: {0}")]
    ContextOverflow(String),
    #[error("tool call parse failure: {0}")]
    ToolCallParseFailure(String),
    #[error("bad request: {0}")]
    BadRequest(#[from] RequestError),
    #[error("gateway configuration: {0}")]
    Config(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_catches_bad_requests() {
        let empty = CompletionRequest::new(vec![], 0.2);
        assert_eq!(empty.validate().unwrap_err(), RequestError::EmptyMessages);

        let bad_role = CompletionRequest::new(vec![ChatMessage::assistant("hi")], 0.2);
        assert_eq!(bad_role.validate().unwrap_err(), RequestError::BadFinalRole);

        let empty_content = CompletionRequest::new(vec![ChatMessage::user("  ")], 0.2);
        assert_eq!(empty_content.validate().unwrap_err(), RequestError::EmptyContent(0));

        let hot = CompletionRequest::new(vec![ChatMessage::user("q")], 2.5);
        assert!(matches!(hot.validate().unwrap_err(), RequestError::TemperatureOutOfRange(_)));

        let ok = CompletionRequest::new(vec![ChatMessage::user("q")], 0.8);
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn backend_config_requires_url_for_http() {
        let mut cfg = BackendConfig::mock();
        assert!(cfg.validate().is_ok());
        cfg.kind = BackendKind::OpenaiHttp;
        assert!(cfg.validate().is_err());
        cfg.base_url = Some("http://localhost:8000".into());
        assert!(cfg.validate().is_ok());
    }
}
