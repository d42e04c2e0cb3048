//! External capabilities: encyclopedia lookup, web search, sandboxed code
//! execution, and knowledge-graph access. Every operation returns a value
//! on failure — agents consume errors as observations.

pub mod fixtures;
pub mod kg;
mod registry;
pub mod sandbox;
pub mod search;
mod spec;
pub mod wiki;

pub use fixtures::{fixture_registry, FixtureEntity, FixtureKg, FixtureSearch, FixtureWiki};
pub use kg::{EntityCandidate, KgClientError, KgTriple, KnowledgeGraph, PropertyRef, WikidataClient, CACHE_DIR_ENV};
pub use registry::{string_arg, Tool, ToolRegistry};
pub use sandbox::CodeSandbox;
pub use search::{snippet_block, LiveDuckDuckGo, SearchHit, SearchSource, WebSearchTool, SEARCH_SNIPPET_CAP};
pub use spec::{ToolCall, ToolErrorKind, ToolResult, ToolSpec};
pub use wiki::{cap_chars, LiveWikipedia, ToolFault, WikiSource, WikipediaTool, WIKI_SUMMARY_CAP};
