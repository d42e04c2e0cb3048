//! Web search: top-result snippets with a 1500-character cap.

use std::sync::Arc;
use std::time::Duration;

use serde_json::Value;

use crate::net;

use super::registry::{string_arg, Tool};
use super::spec::{ToolResult, ToolSpec};
use super::wiki::{cap_chars, urlencode, ToolFault};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub title: String,
    pub snippet: String,
}

/// Where search results come from.
pub trait SearchSource: Send + Sync {
    fn search(&self, query: &str) -> Result<Vec<SearchHit>, ToolFault>;
}

pub const SEARCH_SNIPPET_CAP: usize = 1500;

/// Concatenate hits as "title — snippet" lines under the cap.
pub fn snippet_block(hits: &[SearchHit]) -> String {
    let joined = hits
        .iter()
        .map(|h| {
            if h.title.is_empty() {
                h.snippet.clone()
            } else {
                format!("{} — {}", h.title, h.snippet)
            }
        })
        .collect::<Vec<_>>()
        .join("\n");
    cap_chars(&joined, SEARCH_SNIPPET_CAP)
}

/// Live client for the DuckDuckGo HTML-lite endpoint; results are scraped
/// from the static markup (no JavaScript involved).
pub struct LiveDuckDuckGo {
    base_url: String,
    user_agent: String,
    agent: ureq::Agent,
}

impl LiveDuckDuckGo {
    pub fn new(base_url: &str, user_agent: &str, timeout: Duration) -> Self {
        LiveDuckDuckGo {
            base_url: base_url.trim_end_matches('/').to_string(),
            user_agent: user_agent.to_string(),
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
        }
    }

    pub fn public() -> Self {
        LiveDuckDuckGo::new(
            "https://html.duckduckgo.com",
            "Mozilla/5.0 (compatible; benchmark-harness/0.1)",
            Duration::from_secs(15),
        )
    }
}

/// Extract text between `>`/`<` boundaries of anchors carrying the given
/// class attribute. Good enough for the lite markup, which is stable.
fn scrape_class(html: &str, class: &str) -> Vec<String> {
    let needle = format!("class=\"{class}\"");
    let mut out = Vec::new();
    let mut rest = html;
    while let Some(at) = rest.find(&needle) {
        let after = &rest[at..];
        if let Some(open_end) = after.find('>') {
            let body = &after[open_end + 1..];
            if let Some(close) = body.find("</a>").or_else(|| body.find("</")) {
                let raw = &body[..close];
                let text = strip_tags(raw);
                if !text.trim().is_empty() {
                    out.push(text.trim().to_string());
                }
            }
        }
        rest = &rest[at + needle.len()..];
    }
    out
}

fn strip_tags(html: &str) -> String {
    let mut out = String::new();
    let mut in_tag = false;
    for c in html.chars() {
        match c {
            '<' => in_tag = true,
            '>' => in_tag = false,
            c if !in_tag => out.push(c),
            _ => {}
        }
    }
    out.replace("&amp;", "&")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&quot;", "\"")
        .replace("&#x27;", "'")
        .replace("&nbsp;", " ")
}

impl SearchSource for LiveDuckDuckGo {
    fn search(&self, query: &str) -> Result<Vec<SearchHit>, ToolFault> {
        let url = format!("{}/html/?q={}", self.base_url, urlencode(query));
        net::count_request();
        let response = self
            .agent
            .get(&url)
            .set("User-Agent", &self.user_agent)
            .call()
            .map_err(|e| match e {
                ureq::Error::Status(429, _) => {
                    ToolFault::Network("rate limited by the search endpoint".into())
                }
                other => ToolFault::from_ureq(other),
            })?;
        let html = response
            .into_string()
            .map_err(|e| ToolFault::Network(format!("unreadable reply: {e}")))?;
        let titles = scrape_class(&html, "result__a");
        let snippets = scrape_class(&html, "result__snippet");
        let hits = titles
            .into_iter()
            .zip(snippets)
            .take(5)
            .map(|(title, snippet)| SearchHit { title, snippet })
            .collect();
        Ok(hits)
    }
}

/// The `web_search` tool over any search source.
pub struct WebSearchTool {
    source: Arc<dyn SearchSource>,
}

impl WebSearchTool {
    pub fn new(source: Arc<dyn SearchSource>) -> Self {
        WebSearchTool { source }
    }
}

impl Tool for WebSearchTool {
    fn spec(&self) -> ToolSpec {
        ToolSpec::single_string_param(
            "web_search",
            "Searches the web and returns the top result snippets. Useful for general or \
             up-to-date information.",
            "query",
            "the search query",
        )
    }

    fn invoke(&self, arguments: &Value) -> ToolResult {
        let query = match string_arg(arguments, "query") {
            Ok(query) => query,
            Err(result) => return result,
        };
        match self.source.search(&query) {
            Ok(hits) if hits.is_empty() => ToolResult::success("no results"),
            Ok(hits) => ToolResult::success(snippet_block(&hits)),
            Err(fault) => ToolResult::failure(fault.error_kind(), fault.describe()),
        }
    }
}
