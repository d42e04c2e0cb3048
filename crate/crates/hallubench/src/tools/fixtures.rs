//! Fixture-backed fakes for every external capability, plus fault
//! injection. These are the default in tests and examples; live clients
//! are opt-in.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use super::kg::{EntityCandidate, KgClientError, KgTriple, KnowledgeGraph, PropertyRef};
use super::registry::ToolRegistry;
use super::sandbox::CodeSandbox;
use super::search::{SearchHit, SearchSource, WebSearchTool};
use super::wiki::{ToolFault, WikiSource, WikipediaTool};

/// In-memory article index.
#[derive(Default)]
pub struct FixtureWiki {
    articles: BTreeMap<String, String>,
    fault: Mutex<Option<ToolFault>>,
}

impl FixtureWiki {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_defaults() -> Self {
        let mut wiki = Self::new();
        wiki.insert(
            "Kelp",
            "Kelps are large brown algae or seaweeds that make up the order Laminariales. \
             Kelp grows in underwater forests in shallow oceans and is farmed for its alginates, \
             which are used as thickening agents in food and other products.",
        );
        wiki.insert(
            "Douglas Adams",
            "Douglas Adams was an English author, humorist, and screenwriter, best known as the \
             creator of The Hitchhiker's Guide to the Galaxy.",
        );
        wiki
    }

    pub fn insert(&mut self, title: &str, summary: &str) {
        self.articles.insert(title.to_ascii_lowercase(), summary.to_string());
    }

    /// Make subsequent lookups fail with the given fault (until cleared).
    pub fn set_fault(&self, fault: Option<ToolFault>) {
        *self.fault.lock().unwrap() = fault;
    }
}

impl WikiSource for FixtureWiki {
    fn lead_summary(&self, query: &str) -> Result<Option<String>, ToolFault> {
        if let Some(fault) = self.fault.lock().unwrap().clone() {
            return Err(fault);
        }
        let q = query.to_ascii_lowercase();
        if let Some(summary) = self.articles.get(&q) {
            return Ok(Some(summary.clone()));
        }
        Ok(self
            .articles
            .iter()
            .find(|(title, _)| q.contains(title.as_str()) || title.contains(&q))
            .map(|(_, summary)| summary.clone()))
    }
}

/// In-memory search index: a query matches an entry when it contains the
/// entry's needle (case-insensitive).
#[derive(Default)]
pub struct FixtureSearch {
    entries: Vec<(String, Vec<SearchHit>)>,
    fault: Mutex<Option<ToolFault>>,
}

impl FixtureSearch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_defaults() -> Self {
        let mut search = Self::new();
        search.insert(
            "alginates",
            vec![
                SearchHit {
                    title: "Kelp".into(),
                    snippet: "Kelp is a large brown seaweed farmed for its alginates.".into(),
                },
                SearchHit {
                    title: "Alginate uses".into(),
                    snippet: "Alginates extracted from kelp thicken foods and cosmetics.".into(),
                },
            ],
        );
        search.insert(
            "douglas adams",
            vec![SearchHit {
                title: "Douglas Adams".into(),
                snippet: "English author of The Hitchhiker's Guide to the Galaxy.".into(),
            }],
        );
        search
    }

    pub fn insert(&mut self, needle: &str, hits: Vec<SearchHit>) {
        self.entries.push((needle.to_ascii_lowercase(), hits));
    }

    pub fn set_fault(&self, fault: Option<ToolFault>) {
        *self.fault.lock().unwrap() = fault;
    }
}

impl SearchSource for FixtureSearch {
    fn search(&self, query: &str) -> Result<Vec<SearchHit>, ToolFault> {
        if let Some(fault) = self.fault.lock().unwrap().clone() {
            return Err(fault);
        }
        let q = query.to_ascii_lowercase();
        Ok(self
            .entries
            .iter()
            .find(|(needle, _)| q.contains(needle.as_str()))
            .map(|(_, hits)| hits.clone())
            .unwrap_or_default())
    }
}

/// One fixture entity: identity, searchable aliases, and properties.
#[derive(Debug, Clone)]
pub struct FixtureEntity {
    pub entity_id: String,
    pub label: String,
    pub description: String,
    pub aliases: Vec<String>,
    /// property_id → (label, values)
    pub properties: BTreeMap<String, (String, Vec<String>)>,
}

impl FixtureEntity {
    pub fn new(entity_id: &str, label: &str, description: &str) -> Self {
        FixtureEntity {
            entity_id: entity_id.into(),
            label: label.into(),
            description: description.into(),
            aliases: Vec::new(),
            properties: BTreeMap::new(),
        }
    }

    pub fn alias(mut self, alias: &str) -> Self {
        self.aliases.push(alias.to_ascii_lowercase());
        self
    }

    pub fn property(mut self, property_id: &str, label: &str, values: &[&str]) -> Self {
        self.properties.insert(
            property_id.into(),
            (label.into(), values.iter().map(|v| v.to_string()).collect()),
        );
        self
    }
}

/// In-memory knowledge graph.
#[derive(Default)]
pub struct FixtureKg {
    entities: BTreeMap<String, FixtureEntity>,
    fault: Mutex<Option<KgClientError>>,
}

impl FixtureKg {
    pub fn new() -> Self {
        Self::default()
    }

    /// A small graph centered on entity Q42.
    pub fn with_defaults() -> Self {
        let mut kg = Self::new();
        kg.insert(
            FixtureEntity::new("Q42", "Douglas Adams", "English writer and humorist")
                .alias("douglas adams")
                .alias("douglas noel adams")
                .property("P106", "occupation", &["writer", "screenwriter"])
                .property("P69", "educated at", &["St John's College"])
                .property("P800", "notable work", &["The Hitchhiker's Guide to the Galaxy"]),
        );
        kg
    }

    pub fn insert(&mut self, entity: FixtureEntity) {
        self.entities.insert(entity.entity_id.clone(), entity);
    }

    pub fn set_fault(&self, fault: Option<KgClientError>) {
        *self.fault.lock().unwrap() = fault;
    }

    fn check_fault(&self) -> Result<(), KgClientError> {
        match self.fault.lock().unwrap().clone() {
            Some(fault) => Err(fault),
            None => Ok(()),
        }
    }
}

impl KnowledgeGraph for FixtureKg {
    fn search_entity(&self, term: &str) -> Result<Vec<EntityCandidate>, KgClientError> {
        self.check_fault()?;
        let t = term.to_ascii_lowercase();
        let mut exact = Vec::new();
        let mut partial = Vec::new();
        for entity in self.entities.values() {
            let label = entity.label.to_ascii_lowercase();
            let candidate = EntityCandidate {
                entity_id: entity.entity_id.clone(),
                label: entity.label.clone(),
                description: entity.description.clone(),
            };
            if label == t || entity.aliases.iter().any(|a| a == &t) {
                exact.push(candidate);
            } else if label.contains(&t) || t.contains(&label) {
                partial.push(candidate);
            }
        }
        exact.extend(partial);
        exact.truncate(5);
        Ok(exact)
    }

    fn list_properties(&self, entity_id: &str) -> Result<Vec<PropertyRef>, KgClientError> {
        self.check_fault()?;
        let entity = self
            .entities
            .get(entity_id)
            .ok_or_else(|| KgClientError::NotFound(format!("no entity '{entity_id}'")))?;
        Ok(entity
            .properties
            .iter()
            .map(|(id, (label, _))| PropertyRef { property_id: id.clone(), label: label.clone() })
            .collect())
    }

    fn get_property(&self, entity_id: &str, property_id: &str) -> Result<KgTriple, KgClientError> {
        self.check_fault()?;
        let entity = self
            .entities
            .get(entity_id)
            .ok_or_else(|| KgClientError::NotFound(format!("no entity '{entity_id}'")))?;
        let (label, values) = entity
            .properties
            .get(property_id)
            .ok_or_else(|| KgClientError::NotFound(format!("no property '{property_id}'")))?;
        Ok(KgTriple {
            subject_label: entity.label.clone(),
            property_label: label.clone(),
            value_text: values.join("; "),
        })
    }
}

/// The default offline tool set: fixture wiki + fixture search + a real
/// (local, network-free) code sandbox.
pub fn fixture_registry() -> ToolRegistry {
    let mut registry = ToolRegistry::new();
    registry.insert(Arc::new(WikipediaTool::new(Arc::new(FixtureWiki::with_defaults()))));
    registry.insert(Arc::new(WebSearchTool::new(Arc::new(FixtureSearch::with_defaults()))));
    registry.insert(Arc::new(CodeSandbox::default()));
    registry
}
