//! Prompt templates loaded from data files.
//!
//! Each template is one text file under `templates/`: the prompt body,
//! optionally followed by a `---FORMAT---` line and the output-format
//! instructions appended at render time. Placeholders use `{snake_case}`
//! names. The files bundled with the crate are compiled in via
//! [`TemplateStore::builtin`]; [`TemplateStore::from_dir`] loads edited
//! copies without a rebuild.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use regex::Regex;
use thiserror::Error;

/// Line separating a template's body from its format instructions.
pub const FORMAT_SEPARATOR: &str = "---FORMAT---";

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("unknown template id '{0}'")]
    UnknownTemplate(String),
    #[error("template '{template}' has no binding for placeholder '{placeholder}'")]
    MissingBinding { template: String, placeholder: String },
    #[error("failed to read templates: {0}")]
    Io(#[from] std::io::Error),
}

/// One prompt template: body text with `{placeholder}` names plus the format
/// instructions appended at render time.
#[derive(Debug, Clone)]
pub struct PromptTemplate {
    pub id: String,
    pub body: String,
    pub format_suffix: String,
}

fn placeholder_re() -> &'static Regex {
    static RE: std::sync::OnceLock<Regex> = std::sync::OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\{([a-z][a-z0-9_]*)\}").unwrap())
}

impl PromptTemplate {
    /// Splits raw file contents into body and format suffix.
    pub fn from_text(id: &str, text: &str) -> Self {
        let (body, suffix) = match text.split_once(&format!("\n{FORMAT_SEPARATOR}\n")) {
            Some((b, s)) => (b.to_string(), s.trim_end().to_string()),
            None => (text.trim_end().to_string(), String::new()),
        };
        PromptTemplate {
            id: id.to_string(),
            body: body.trim_end().to_string(),
            format_suffix: suffix,
        }
    }

    /// Placeholder names appearing in the body.
    pub fn placeholders(&self) -> BTreeSet<String> {
        placeholder_re()
            .captures_iter(&self.body)
            .map(|c| c[1].to_string())
            .collect()
    }

    /// Substitutes bindings into the body and appends the format suffix.
    ///
    /// Every placeholder must have a binding; unbound placeholders are an
    /// error, never emitted literally.
    pub fn render(&self, bindings: &[(&str, &str)]) -> Result<String, TemplateError> {
        let mut out = String::with_capacity(self.body.len());
        let mut last = 0;
        for caps in placeholder_re().captures_iter(&self.body) {
            let m = caps.get(0).unwrap();
            let name = &caps[1];
            let value = bindings
                .iter()
                .find(|(k, _)| *k == name)
                .map(|(_, v)| *v)
                .ok_or_else(|| TemplateError::MissingBinding {
                    template: self.id.clone(),
                    placeholder: name.to_string(),
                })?;
            out.push_str(&self.body[last..m.start()]);
            out.push_str(value);
            last = m.end();
        }
        out.push_str(&self.body[last..]);
        if !self.format_suffix.is_empty() {
            out.push_str("\n\n");
            out.push_str(&self.format_suffix);
        }
        Ok(out)
    }
}

macro_rules! builtin_templates {
    ($($id:literal),+ $(,)?) => {
        &[$(($id, include_str!(concat!("../../templates/", $id, ".txt")))),+]
    };
}

/// (id, raw file contents) for every bundled template.
pub const BUILTIN_TEMPLATES: &[(&str, &str)] = builtin_templates![
    "gsm8k_control",
    "gsm8k_cot",
    "tot_vote",
    "gsm8k_mad_initial",
    "gsm8k_mad_iterative",
    "triviaqa_control",
    "triviaqa_mad_initial",
    "triviaqa_mad_iterative",
    "ddga",
    "kgr_entity",
    "kgr_property",
    "kgr_final",
    "cove1_initial",
    "cove1_genq",
    "cove1_check",
    "mmlu_control",
    "mmlu_mad_initial",
    "mmlu_mad_iterative",
    "cove2_open",
    "cove2_check",
    "reflect_initial",
    "reflect_critique",
    "reflect_revise",
    "chain_final",
    "react_system",
    "react_force_answer",
];

/// Immutable collection of templates addressed by id.
#[derive(Debug, Clone)]
pub struct TemplateStore {
    templates: BTreeMap<String, PromptTemplate>,
}

impl TemplateStore {
    /// The templates bundled with the crate.
    pub fn builtin() -> Self {
        let templates = BUILTIN_TEMPLATES
            .iter()
            .map(|(id, text)| (id.to_string(), PromptTemplate::from_text(id, text)))
            .collect();
        TemplateStore { templates }
    }

    /// Loads every `*.txt` file in `dir` as a template named after the file
    /// stem. Missing ids fall back to the bundled versions.
    pub fn from_dir(dir: &Path) -> Result<Self, TemplateError> {
        let mut store = Self::builtin();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "txt") {
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().to_string())
                    .unwrap_or_default();
                let text = std::fs::read_to_string(&path)?;
                store
                    .templates
                    .insert(id.clone(), PromptTemplate::from_text(&id, &text));
            }
        }
        Ok(store)
    }

    pub fn get(&self, id: &str) -> Result<&PromptTemplate, TemplateError> {
        self.templates
            .get(id)
            .ok_or_else(|| TemplateError::UnknownTemplate(id.to_string()))
    }

    /// Renders template `id` with the given bindings.
    pub fn render(&self, id: &str, bindings: &[(&str, &str)]) -> Result<String, TemplateError> {
        self.get(id)?.render(bindings)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.templates.keys().map(|s| s.as_str())
    }
}
