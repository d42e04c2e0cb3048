//! Prompt rendering and structured answer parsing.

pub mod numeric;
pub mod parse;
pub mod template;
pub mod tolerance;

pub use numeric::canonical_numeric;
pub use parse::{
    parse, AnswerValue, ParseFailure, ParseKind, ParseSpec, ParsedAnswer, DEFAULT_TOLERANCE,
};
pub use template::{PromptTemplate, TemplateError, TemplateStore};
pub use tolerance::{ask_with_tolerance, AskError, AskOutcome};
