//! Benchmark harness for hallucination-mitigation prompting strategies and
//! tool-calling agents over any chat-completion backend.
//!
//! The library layers as follows:
//!
//! - [`gateway`] — provider-agnostic chat completion (OpenAI-compatible,
//!   Ollama-style, or a deterministic scripted/statistical mock) with
//!   transcript capture and per-session prompt counting.
//! - [`codec`] — prompt templates rendered from data files, plus parsing of
//!   numeric / free-text / multiple-choice / step-by-step answers with a
//!   bounded re-ask loop.
//! - [`tools`] — encyclopedia lookup, web search, sandboxed Python
//!   execution, and knowledge-graph access; live clients and fixture fakes.
//!
//! Start with the `examples/` directory: each file is a small, runnable
//! walkthrough of one capability, from a single mock-backed question to a
//! full benchmark grid with reports.

pub mod agent;
pub mod bench;
pub mod codec;
pub mod gateway;
pub mod net;
pub mod runner;
pub mod seed;
pub mod strategy;
pub mod tools;
