//! Encyclopedia lookup: lead-summary retrieval with a 1200-character cap.

use std::sync::Arc;
use std::time::Duration;

use serde_json::Value;

use crate::net;

use super::registry::{string_arg, Tool};
use super::spec::{ToolErrorKind, ToolResult, ToolSpec};

/// Transport-level failures shared by the lookup/search client traits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ToolFault {
    Timeout,
    Network(String),
}

impl ToolFault {
    pub fn error_kind(&self) -> ToolErrorKind {
        match self {
            ToolFault::Timeout => ToolErrorKind::Timeout,
            ToolFault::Network(_) => ToolErrorKind::Network,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ToolFault::Timeout => "request timed out".to_string(),
            ToolFault::Network(detail) => format!("network failure: {detail}"),
        }
    }

    pub fn from_ureq(err: ureq::Error) -> Self {
        match &err {
            ureq::Error::Transport(t) if format!("{t}").contains("timed out") => ToolFault::Timeout,
            _ => ToolFault::Network(err.to_string()),
        }
    }
}

/// Where article summaries come from; `None` means no matching article.
pub trait WikiSource: Send + Sync {
    fn lead_summary(&self, query: &str) -> Result<Option<String>, ToolFault>;
}

pub const WIKI_SUMMARY_CAP: usize = 1200;

/// Character-exact truncation used by the tool wrappers.
pub fn cap_chars(text: &str, cap: usize) -> String {
    if text.chars().count() <= cap {
        text.to_string()
    } else {
        text.chars().take(cap).collect()
    }
}

/// Live client for a MediaWiki installation: title search resolves the
/// query, then the REST summary endpoint supplies the lead extract.
pub struct LiveWikipedia {
    base_url: String,
    agent: ureq::Agent,
}

impl LiveWikipedia {
    pub fn new(base_url: &str, timeout: Duration) -> Self {
        LiveWikipedia {
            base_url: base_url.trim_end_matches('/').to_string(),
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }

    pub fn english() -> Self {
        LiveWikipedia::new("https://en.wikipedia.org", Duration::from_secs(15))
    }

    fn get_json(&self, url: &str) -> Result<Value, ToolFault> {
        net::count_request();
        let response = self.agent.get(url).call().map_err(ToolFault::from_ureq)?;
        response
            .into_json()
            .map_err(|e| ToolFault::Network(format!("non-JSON reply: {e}")))
    }
}

impl WikiSource for LiveWikipedia {
    fn lead_summary(&self, query: &str) -> Result<Option<String>, ToolFault> {
        let search_url = format!(
            "{}/w/rest.php/v1/search/title?q={}&limit=1",
            self.base_url,
            urlencode(query)
        );
        let search = self.get_json(&search_url)?;
        let key = match search["pages"].get(0).and_then(|p| p["key"].as_str()) {
            Some(key) => key.to_string(),
            None => return Ok(None),
        };
        let summary_url = format!("{}/api/rest_v1/page/summary/{}", self.base_url, urlencode(&key));
        let summary = self.get_json(&summary_url)?;
        Ok(summary["extract"].as_str().map(str::to_string))
    }
}

/// Percent-encodes everything outside the URL-safe set.
pub fn urlencode(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for byte in raw.bytes() {
        match byte {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' | b'~' => {
                out.push(byte as char)
            }
            _ => out.push_str(&format!("%{byte:02X}")),
        }
    }
    out
}

/// The `wikipedia_lookup` tool over any summary source.
pub struct WikipediaTool {
    source: Arc<dyn WikiSource>,
}

impl WikipediaTool {
    pub fn new(source: Arc<dyn WikiSource>) -> Self {
        WikipediaTool { source }
    }
}

impl Tool for WikipediaTool {
    fn spec(&self) -> ToolSpec {
        ToolSpec::single_string_param(
            "wikipedia_lookup",
            "Looks up an encyclopedia article and returns the lead summary. Useful for questions \
             about people, places, or items.",
            "query",
            "the article title or topic to look up",
        )
    }

    fn invoke(&self, arguments: &Value) -> ToolResult {
        let query = match string_arg(arguments, "query") {
            Ok(query) => query,
            Err(result) => return result,
        };
        match self.source.lead_summary(&query) {
            Ok(Some(summary)) => ToolResult::success(cap_chars(&summary, WIKI_SUMMARY_CAP)),
            Ok(None) => ToolResult::success("no article found"),
            Err(fault) => ToolResult::failure(fault.error_kind(), fault.describe()),
        }
    }
}
