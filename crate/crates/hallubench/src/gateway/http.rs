//! Live HTTP backends: OpenAI-compatible and Ollama-style chat endpoints.

use std::time::Duration;

use serde_json::{json, Value};

use crate::net;
use crate::tools::{ToolCall, ToolSpec};

use super::types::{
    BackendConfig, BackendKind, CompletionRequest, CompletionResponse, FinishReason, GatewayError,
    ModelReply, TokenUsage,
};

const MAX_BACKOFF: Duration = Duration::from_secs(30);

/// Seeds travel as signed 32-bit integers on the wire; fold our 64-bit
/// seeds into that range deterministically.
pub fn wire_seed(seed: u64) -> u64 {
    seed & 0x7fff_ffff
}

/// Request body for the OpenAI-compatible chat endpoint.
pub fn openai_body(request: &CompletionRequest, model: &str, tools: Option<&[ToolSpec]>) -> Value {
    let messages: Vec<Value> = request
        .messages
        .iter()
        .map(|m| json!({ "role": role_name(m), "content": m.content }))
        .collect();
    let mut body = json!({
        "model": model,
        "messages": messages,
        "temperature": request.temperature,
    });
    if let Some(seed) = request.seed {
        body["seed"] = json!(wire_seed(seed));
    }
    if let Some(max_tokens) = request.max_tokens {
        body["max_tokens"] = json!(max_tokens);
    }
    if let Some(tools) = tools {
        body["tools"] = Value::Array(tools.iter().map(tool_decl).collect());
    }
    body
}

/// Request body for the Ollama-style chat endpoint.
pub fn ollama_body(request: &CompletionRequest, model: &str, tools: Option<&[ToolSpec]>) -> Value {
    let messages: Vec<Value> = request
        .messages
        .iter()
        .map(|m| json!({ "role": role_name(m), "content": m.content }))
        .collect();
    let mut options = json!({ "temperature": request.temperature });
    if let Some(seed) = request.seed {
        options["seed"] = json!(wire_seed(seed));
    }
    if let Some(max_tokens) = request.max_tokens {
        options["num_predict"] = json!(max_tokens);
    }
    let mut body = json!({
        "model": model,
        "messages": messages,
        "options": options,
        "stream": false,
    });
    if let Some(tools) = tools {
        body["tools"] = Value::Array(tools.iter().map(tool_decl).collect());
    }
    body
}

fn role_name(message: &super::types::ChatMessage) -> &'static str {
    match message.role {
        super::types::Role::System => "system",
        super::types::Role::User => "user",
        super::types::Role::Assistant => "assistant",
        super::types::Role::Tool => "tool",
    }
}

fn tool_decl(spec: &ToolSpec) -> Value {
    json!({
        "type": "function",
        "function": {
            "name": spec.name,
            "description": spec.description,
            "parameters": spec.parameters,
        },
    })
}

fn malformed(detail: impl Into<String>) -> GatewayError {
    GatewayError::MalformedBackendReply(detail.into())
}

fn parse_usage(value: &Value) -> Option<TokenUsage> {
    let prompt = value.get("prompt_tokens").or_else(|| value.get("prompt_eval_count"))?;
    let completion = value.get("completion_tokens").or_else(|| value.get("eval_count"))?;
    Some(TokenUsage {
        prompt_tokens: prompt.as_u64()?,
        completion_tokens: completion.as_u64()?,
    })
}

fn finish_reason_from(reason: Option<&str>) -> FinishReason {
    match reason {
        Some("stop") | None => FinishReason::Stop,
        Some("length") => FinishReason::Length,
        Some(_) => FinishReason::Error,
    }
}

/// Extract the reply from an OpenAI-compatible response body.
pub fn parse_openai_reply(body: &Value) -> Result<(ModelReply, FinishReason, Option<TokenUsage>), GatewayError> {
    let choice = body
        .get("choices")
        .and_then(|c| c.get(0))
        .ok_or_else(|| malformed("reply has no choices"))?;
    let message = choice.get("message").ok_or_else(|| malformed("choice has no message"))?;
    let finish = finish_reason_from(choice.get("finish_reason").and_then(Value::as_str));
    let usage = body.get("usage").and_then(parse_usage);

    if let Some(calls) = message.get("tool_calls").and_then(Value::as_array) {
        let parsed = calls
            .iter()
            .map(|call| {
                let function = call
                    .get("function")
                    .ok_or_else(|| GatewayError::ToolCallParseFailure("call has no function".into()))?;
                let name = function
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| GatewayError::ToolCallParseFailure("call has no name".into()))?;
                // OpenAI sends arguments as a JSON-encoded string; Ollama as an object.
                let arguments = match function.get("arguments") {
                    Some(Value::String(s)) => serde_json::from_str(s).map_err(|e| {
                        GatewayError::ToolCallParseFailure(format!("arguments not JSON: {e}"))
                    })?,
                    Some(v) => v.clone(),
                    None => json!({}),
                };
                Ok(ToolCall { name: name.to_string(), arguments })
            })
            .collect::<Result<Vec<_>, GatewayError>>()?;
        return Ok((ModelReply::ToolCalls(parsed), finish, usage));
    }

    let content = message
        .get("content")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("message has no content"))?;
    Ok((ModelReply::Text(content.to_string()), finish, usage))
}

/// Extract the reply from an Ollama-style response body.
pub fn parse_ollama_reply(body: &Value) -> Result<(ModelReply, FinishReason, Option<TokenUsage>), GatewayError> {
    let message = body.get("message").ok_or_else(|| malformed("reply has no message"))?;
    let finish = finish_reason_from(body.get("done_reason").and_then(Value::as_str));
    let usage = parse_usage(body);

    if let Some(calls) = message.get("tool_calls").and_then(Value::as_array) {
        let parsed = calls
            .iter()
            .map(|call| {
                let function = call
                    .get("function")
                    .ok_or_else(|| GatewayError::ToolCallParseFailure("call has no function".into()))?;
                let name = function
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| GatewayError::ToolCallParseFailure("call has no name".into()))?;
                let arguments = function.get("arguments").cloned().unwrap_or_else(|| json!({}));
                Ok(ToolCall { name: name.to_string(), arguments })
            })
            .collect::<Result<Vec<_>, GatewayError>>()?;
        return Ok((ModelReply::ToolCalls(parsed), finish, usage));
    }

    let content = message
        .get("content")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("message has no content"))?;
    Ok((ModelReply::Text(content.to_string()), finish, usage))
}

fn looks_like_context_overflow(status: u16, body: &str) -> bool {
    if !(400..500).contains(&status) {
        return false;
    }
    let lower = body.to_ascii_lowercase();
    ["context length", "context_length", "maximum context", "too many tokens", "context window"]
        .iter()
        .any(|phrase| lower.contains(phrase))
}

pub struct HttpBackend {
    config: BackendConfig,
    agent: ureq::Agent,
}

impl HttpBackend {
    pub fn new(config: BackendConfig) -> Result<Self, GatewayError> {
        config.validate().map_err(GatewayError::Config)?;
        if config.kind == BackendKind::Mock {
            return Err(GatewayError::Config("mock backend is not an HTTP backend".into()));
        }
        let agent = ureq::AgentBuilder::new()
            .timeout(config.timeout())
            .build();
        Ok(HttpBackend { config, agent })
    }

    fn endpoint(&self) -> String {
        let base = self.config.base_url.as_deref().unwrap_or("").trim_end_matches('/');
        match self.config.kind {
            BackendKind::OpenaiHttp => format!("{base}/v1/chat/completions"),
            BackendKind::OllamaHttp => format!("{base}/api/chat"),
            BackendKind::Mock => unreachable!("rejected at construction"),
        }
    }

    fn body(&self, request: &CompletionRequest, tools: Option<&[ToolSpec]>) -> Value {
        match self.config.kind {
            BackendKind::OpenaiHttp => openai_body(request, &self.config.model_name, tools),
            BackendKind::OllamaHttp => ollama_body(request, &self.config.model_name, tools),
            BackendKind::Mock => unreachable!("rejected at construction"),
        }
    }

    /// POST with retry on transient failures (transport errors, 429, 5xx);
    /// backoff doubles per attempt from `retry_backoff`, capped at 30 s.
    fn send(&self, body: &Value) -> Result<Value, GatewayError> {
        let url = self.endpoint();
        let mut backoff = self.config.retry_backoff();
        let attempts = self.config.max_retries + 1;
        let mut last_failure = String::new();

        for attempt in 0..attempts {
            if attempt > 0 {
                std::thread::sleep(backoff.min(MAX_BACKOFF));
                backoff = (backoff * 2).min(MAX_BACKOFF);
            }
            net::count_request();
            match self.agent.post(&url).send_json(body.clone()) {
                Ok(response) => {
                    return response
                        .into_json::<Value>()
                        .map_err(|e| malformed(format!("non-JSON reply: {e}")));
                }
                Err(ureq::Error::Status(status, response)) => {
                    let text = response.into_string().unwrap_or_default();
                    if looks_like_context_overflow(status, &text) {
                        return Err(GatewayError::ContextOverflow(format!("status {status}: {text}")));
                    }
                    if status == 429 || status >= 500 {
                        last_failure = format!("status {status}: {text}");
                        continue;
                    }
                    return Err(malformed(format!("status {status}: {text}")));
                }
                Err(ureq::Error::Transport(t)) => {
                    last_failure = t.to_string();
                    continue;
                }
            }
        }
        Err(GatewayError::BackendUnreachable(format!(
            "{url} after {attempts} attempts: {last_failure}"
        )))
    }

    pub fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, GatewayError> {
        let reply = self.send(&self.body(request, None))?;
        let (reply, finish_reason, usage) = match self.config.kind {
            BackendKind::OpenaiHttp => parse_openai_reply(&reply)?,
            BackendKind::OllamaHttp => parse_ollama_reply(&reply)?,
            BackendKind::Mock => unreachable!(),
        };
        match reply {
            ModelReply::Text(content) => Ok(CompletionResponse { content, finish_reason, usage }),
            ModelReply::ToolCalls(_) => Err(malformed("tool calls in a plain completion")),
        }
    }

    pub fn complete_with_tools(
        &self,
        request: &CompletionRequest,
        tools: &[ToolSpec],
    ) -> Result<ModelReply, GatewayError> {
        let reply = self.send(&self.body(request, Some(tools)))?;
        let (reply, _, _) = match self.config.kind {
            BackendKind::OpenaiHttp => parse_openai_reply(&reply)?,
            BackendKind::OllamaHttp => parse_ollama_reply(&reply)?,
            BackendKind::Mock => unreachable!(),
        };
        Ok(reply)
    }
}
