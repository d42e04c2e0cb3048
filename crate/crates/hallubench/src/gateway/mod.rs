//! Provider-agnostic access to chat-completion backends.
//!
//! A [`Gateway`] owns one backend (live HTTP or deterministic mock) plus a
//! transcript sink; [`Session`]s scope calls to one transcript id and count
//! prompts, which is where strategy cost accounting comes from.

mod http;
mod mock;
mod transcript;
mod types;

pub use http::{ollama_body, openai_body, parse_ollama_reply, parse_openai_reply, wire_seed, HttpBackend};
pub use mock::{Matcher, MockBackend, MockMode, MockRule, MockScript, MockScriptError, WeightedResponse};
pub use transcript::{ClockMode, TranscriptSink};
pub use types::{
    BackendConfig, BackendKind, ChatMessage, CompletionRequest, CompletionResponse, FinishReason,
    GatewayError, ModelReply, RequestError, Role, TokenUsage,
};

use std::sync::atomic::{AtomicU64, Ordering};

use crate::tools::{ToolCall, ToolSpec};

enum Inner {
    Mock(MockBackend),
    Http(HttpBackend),
}

pub struct Gateway {
    config: BackendConfig,
    inner: Inner,
    transcript: TranscriptSink,
}

impl Gateway {
    /// Build a gateway; mock backends require a script, HTTP backends a URL.
    pub fn new(
        config: BackendConfig,
        mock_script: Option<&MockScript>,
        transcript: TranscriptSink,
    ) -> Result<Self, GatewayError> {
        config.validate().map_err(GatewayError::Config)?;
        let inner = match config.kind {
            BackendKind::Mock => {
                let script = mock_script
                    .ok_or_else(|| GatewayError::Config("mock backend requires mock_script".into()))?;
                Inner::Mock(MockBackend::new(script).map_err(|e| GatewayError::Config(e.to_string()))?)
            }
            _ => Inner::Http(HttpBackend::new(config.clone())?),
        };
        Ok(Gateway { config, inner, transcript })
    }

    /// Mock gateway with an in-memory transcript; the default for tests and examples.
    pub fn mock(script: &MockScript) -> Result<Self, GatewayError> {
        Gateway::new(
            BackendConfig::mock(),
            Some(script),
            TranscriptSink::in_memory(ClockMode::Logical),
        )
    }

    pub fn config(&self) -> &BackendConfig {
        &self.config
    }

    pub fn transcript(&self) -> &TranscriptSink {
        &self.transcript
    }

    /// Natural transcript clock for a backend kind: logical (replayable)
    /// for mocks, wall time for live endpoints.
    pub fn clock_for(kind: BackendKind) -> ClockMode {
        match kind {
            BackendKind::Mock => ClockMode::Logical,
            _ => ClockMode::Wall,
        }
    }

    /// Scripted-consumption count, for mock backends.
    pub fn mock_calls(&self) -> Option<u64> {
        match &self.inner {
            Inner::Mock(m) => Some(m.calls()),
            Inner::Http(_) => None,
        }
    }

    /// Open a call-counting session tied to one transcript id.
    pub fn session(&self, transcript_id: impl Into<String>) -> Session<'_> {
        Session { gateway: self, transcript_id: transcript_id.into(), calls: AtomicU64::new(0) }
    }
}

/// Replies from a mock that start a JSON object mentioning `tool_calls`
/// are treated as structured calls: `{"tool_calls":[{"name":...,
/// "arguments":{...}}]}`. Anything else is plain text.
fn parse_mock_reply(content: &str) -> Result<ModelReply, GatewayError> {
    let trimmed = content.trim_start();
    if !(trimmed.starts_with('{') && trimmed.contains("tool_calls")) {
        return Ok(ModelReply::Text(content.to_string()));
    }
    let value: serde_json::Value = serde_json::from_str(trimmed)
        .map_err(|e| GatewayError::ToolCallParseFailure(format!("envelope not JSON: {e}")))?;
    let calls = value
        .get("tool_calls")
        .and_then(serde_json::Value::as_array)
        .ok_or_else(|| GatewayError::ToolCallParseFailure("envelope missing tool_calls array".into()))?;
    let parsed = calls
        .iter()
        .map(|call| {
            let name = call
                .get("name")
                .and_then(serde_json::Value::as_str)
                .ok_or_else(|| GatewayError::ToolCallParseFailure("call has no name".into()))?;
            let arguments = call.get("arguments").cloned().unwrap_or_else(|| serde_json::json!({}));
            Ok(ToolCall { name: name.to_string(), arguments })
        })
        .collect::<Result<Vec<_>, GatewayError>>()?;
    Ok(ModelReply::ToolCalls(parsed))
}

/// A call-counted window onto one gateway. Strategies report cost as the
/// number of prompts issued through their session.
pub struct Session<'g> {
    gateway: &'g Gateway,
    transcript_id: String,
    calls: AtomicU64,
}

impl<'g> Session<'g> {
    pub fn transcript_id(&self) -> &str {
        &self.transcript_id
    }

    /// Prompts issued through this session so far.
    pub fn prompt_count(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }

    /// Append an out-of-band annotation to the transcript.
    pub fn note(&self, text: &str) {
        self.gateway
            .transcript
            .note(&self.transcript_id, self.gateway.config.kind.as_str(), text);
    }

    fn record(&self, request: &CompletionRequest, response: &CompletionResponse) {
        self.gateway.transcript.record(
            &self.transcript_id,
            self.gateway.config.kind.as_str(),
            request,
            response,
        );
    }

    pub fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, GatewayError> {
        request.validate()?;
        self.calls.fetch_add(1, Ordering::SeqCst);
        let response = match &self.gateway.inner {
            Inner::Mock(mock) => mock.respond(request),
            Inner::Http(http) => http.complete(request)?,
        };
        self.record(request, &response);
        Ok(response)
    }

    pub fn complete_with_tools(
        &self,
        request: &CompletionRequest,
        tools: &[ToolSpec],
    ) -> Result<ModelReply, GatewayError> {
        request.validate()?;
        self.calls.fetch_add(1, Ordering::SeqCst);
        match &self.gateway.inner {
            Inner::Mock(mock) => {
                let response = mock.respond(request);
                self.record(request, &response);
                parse_mock_reply(&response.content)
            }
            Inner::Http(http) => {
                let reply = http.complete_with_tools(request, tools)?;
                let content = match &reply {
                    ModelReply::Text(text) => text.clone(),
                    ModelReply::ToolCalls(calls) => {
                        serde_json::to_string(&serde_json::json!({ "tool_calls": calls }))
                            .expect("tool calls serialize")
                    }
                };
                let response =
                    CompletionResponse { content, finish_reason: FinishReason::Stop, usage: None };
                self.record(request, &response);
                Ok(reply)
            }
        }
    }
}
