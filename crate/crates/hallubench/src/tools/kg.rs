//! Knowledge-graph access: entity search, property listing, and triple
//! retrieval, with an on-disk response cache for the live client.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde_json::Value;
use thiserror::Error;

use crate::net;
use crate::seed::sha256_hex;

use super::wiki::urlencode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityCandidate {
    pub entity_id: String,
    pub label: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyRef {
    pub property_id: String,
    pub label: String,
}

/// One resolved edge: subject, property, and human-readable value text
/// (multi-valued properties joined with "; ").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KgTriple {
    pub subject_label: String,
    pub property_label: String,
    pub value_text: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KgClientError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("knowledge-graph request timed out")]
    Timeout,
    #[error("knowledge-graph network failure: {0}")]
    Network(String),
    #[error("malformed knowledge-graph reply: {0}")]
    Malformed(String),
}

/// Read-side interface over a knowledge graph. Implementations: the live
/// client below and the fixture fake in [`super::fixtures`].
pub trait KnowledgeGraph: Send + Sync {
    /// Up to 5 candidates ranked by the service.
    fn search_entity(&self, term: &str) -> Result<Vec<EntityCandidate>, KgClientError>;
    fn list_properties(&self, entity_id: &str) -> Result<Vec<PropertyRef>, KgClientError>;
    fn get_property(&self, entity_id: &str, property_id: &str) -> Result<KgTriple, KgClientError>;
}

/// Response cache keyed by request-URL hash; one file per URL.
struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    fn path_for(&self, url: &str) -> PathBuf {
        self.dir.join(format!("{}.json", sha256_hex(url.as_bytes())))
    }

    fn get(&self, url: &str) -> Option<String> {
        std::fs::read_to_string(self.path_for(url)).ok()
    }

    fn put(&self, url: &str, body: &str) {
        if std::fs::create_dir_all(&self.dir).is_ok() {
            let _ = std::fs::write(self.path_for(url), body);
        }
    }
}

/// Environment variable naming the cache directory for live KG lookups.
pub const CACHE_DIR_ENV: &str = "HARNESS_CACHE_DIR";

fn default_cache_dir() -> PathBuf {
    match std::env::var_os(CACHE_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => std::env::temp_dir().join("hallubench-kg-cache"),
    }
}

/// Live client for a Wikibase-style API (`wbsearchentities`, `wbgetclaims`,
/// `wbgetentities`).
pub struct WikidataClient {
    base_url: String,
    agent: ureq::Agent,
    cache: Option<DiskCache>,
}

impl WikidataClient {
    pub fn new(base_url: &str, timeout: Duration, cache_dir: Option<&Path>) -> Self {
        WikidataClient {
            base_url: base_url.trim_end_matches('/').to_string(),
            agent: ureq::AgentBuilder::new().timeout(timeout).build(),
            cache: cache_dir.map(|dir| DiskCache { dir: dir.to_path_buf() }),
        }
    }

    /// The public endpoint, cached under `HARNESS_CACHE_DIR` (or the system
    /// temp directory when unset).
    pub fn public() -> Self {
        let dir = default_cache_dir();
        WikidataClient::new("https://www.wikidata.org", Duration::from_secs(20), Some(&dir))
    }

    fn fetch(&self, url: &str) -> Result<Value, KgClientError> {
        if let Some(cache) = &self.cache {
            if let Some(body) = cache.get(url) {
                return serde_json::from_str(&body)
                    .map_err(|e| KgClientError::Malformed(format!("cached reply: {e}")));
            }
        }
        net::count_request();
        let response = self.agent.get(url).call().map_err(|e| match e {
            ureq::Error::Transport(ref t) if format!("{t}").contains("timed out") => {
                KgClientError::Timeout
            }
            other => KgClientError::Network(other.to_string()),
        })?;
        let body = response
            .into_string()
            .map_err(|e| KgClientError::Network(format!("unreadable reply: {e}")))?;
        let value: Value = serde_json::from_str(&body)
            .map_err(|e| KgClientError::Malformed(format!("non-JSON reply: {e}")))?;
        if let Some(error) = value.get("error") {
            let code = error["code"].as_str().unwrap_or("unknown");
            if code.contains("no-such-entity") || code.contains("missing") {
                return Err(KgClientError::NotFound(code.to_string()));
            }
            return Err(KgClientError::Malformed(format!("service error: {code}")));
        }
        if let Some(cache) = &self.cache {
            cache.put(url, &body);
        }
        Ok(value)
    }

    fn api(&self, query: &str) -> String {
        format!("{}/w/api.php?format=json&{query}", self.base_url)
    }

    fn check_id(id: &str) -> Result<(), KgClientError> {
        let mut chars = id.chars();
        let head = chars.next();
        let ok = matches!(head, Some('Q') | Some('P'))
            && chars.clone().next().is_some()
            && chars.all(|c| c.is_ascii_digit());
        if ok {
            Ok(())
        } else {
            Err(KgClientError::NotFound(format!("malformed id '{id}'")))
        }
    }

    /// Labels for a batch of entity/property ids; ids without an English
    /// label fall back to the id itself.
    fn resolve_labels(&self, ids: &[String]) -> Result<BTreeMap<String, String>, KgClientError> {
        let mut labels = BTreeMap::new();
        for chunk in ids.chunks(50) {
            let url = self.api(&format!(
                "action=wbgetentities&props=labels&languages=en&ids={}",
                urlencode(&chunk.join("|"))
            ));
            let reply = self.fetch(&url)?;
            for id in chunk {
                let label = reply["entities"][id]["labels"]["en"]["value"]
                    .as_str()
                    .unwrap_or(id)
                    .to_string();
                labels.insert(id.clone(), label);
            }
        }
        Ok(labels)
    }

    fn render_value(&self, datavalue: &Value) -> Result<String, KgClientError> {
        let kind = datavalue["type"].as_str().unwrap_or("");
        let value = &datavalue["value"];
        Ok(match kind {
            "string" => value.as_str().unwrap_or("").to_string(),
            "monolingualtext" => value["text"].as_str().unwrap_or("").to_string(),
            "time" => value["time"]
                .as_str()
                .unwrap_or("")
                .trim_start_matches('+')
                .split('T')
                .next()
                .unwrap_or("")
                .to_string(),
            "quantity" => value["amount"].as_str().unwrap_or("").trim_start_matches('+').to_string(),
            "globecoordinate" => format!(
                "{}, {}",
                value["latitude"].as_f64().unwrap_or(0.0),
                value["longitude"].as_f64().unwrap_or(0.0)
            ),
            "wikibase-entityid" => {
                let id = value["id"]
                    .as_str()
                    .map(str::to_string)
                    .or_else(|| value["numeric-id"].as_u64().map(|n| format!("Q{n}")))
                    .ok_or_else(|| KgClientError::Malformed("entity value without id".into()))?;
                self.resolve_labels(std::slice::from_ref(&id))?
                    .remove(&id)
                    .unwrap_or(id)
            }
            other => {
                return Err(KgClientError::Malformed(format!("unsupported value type '{other}'")))
            }
        })
    }
}

impl KnowledgeGraph for WikidataClient {
    fn search_entity(&self, term: &str) -> Result<Vec<EntityCandidate>, KgClientError> {
        let url = self.api(&format!(
            "action=wbsearchentities&language=en&uselang=en&type=item&limit=5&search={}",
            urlencode(term)
        ));
        let reply = self.fetch(&url)?;
        let hits = reply["search"]
            .as_array()
            .ok_or_else(|| KgClientError::Malformed("missing search array".into()))?;
        Ok(hits
            .iter()
            .filter_map(|hit| {
                Some(EntityCandidate {
                    entity_id: hit["id"].as_str()?.to_string(),
                    label: hit["label"].as_str().unwrap_or("").to_string(),
                    description: hit["description"].as_str().unwrap_or("").to_string(),
                })
            })
            .take(5)
            .collect())
    }

    fn list_properties(&self, entity_id: &str) -> Result<Vec<PropertyRef>, KgClientError> {
        Self::check_id(entity_id)?;
        let url = self.api(&format!("action=wbgetclaims&entity={}", urlencode(entity_id)));
        let reply = self.fetch(&url)?;
        let claims = reply["claims"]
            .as_object()
            .ok_or_else(|| KgClientError::Malformed("missing claims object".into()))?;
        let ids: Vec<String> = claims.keys().cloned().collect();
        if ids.is_empty() {
            return Ok(Vec::new());
        }
        let labels = self.resolve_labels(&ids)?;
        Ok(ids
            .into_iter()
            .map(|id| {
                let label = labels.get(&id).cloned().unwrap_or_else(|| id.clone());
                PropertyRef { property_id: id, label }
            })
            .collect())
    }

    fn get_property(&self, entity_id: &str, property_id: &str) -> Result<KgTriple, KgClientError> {
        Self::check_id(entity_id)?;
        Self::check_id(property_id)?;
        let url = self.api(&format!(
            "action=wbgetclaims&entity={}&property={}",
            urlencode(entity_id),
            urlencode(property_id)
        ));
        let reply = self.fetch(&url)?;
        let statements = reply["claims"][property_id]
            .as_array()
            .filter(|a| !a.is_empty())
            .ok_or_else(|| {
                KgClientError::NotFound(format!("{entity_id} has no {property_id} claims"))
            })?;
        let mut values = Vec::new();
        for statement in statements {
            let datavalue = &statement["mainsnak"]["datavalue"];
            if datavalue.is_null() {
                continue;
            }
            let rendered = self.render_value(datavalue)?;
            if !rendered.is_empty() {
                values.push(rendered);
            }
        }
        if values.is_empty() {
            return Err(KgClientError::NotFound(format!(
                "{entity_id}/{property_id} has no renderable value"
            )));
        }
        let labels =
            self.resolve_labels(&[entity_id.to_string(), property_id.to_string()])?;
        Ok(KgTriple {
            subject_label: labels.get(entity_id).cloned().unwrap_or_else(|| entity_id.into()),
            property_label: labels.get(property_id).cloned().unwrap_or_else(|| property_id.into()),
            value_text: values.join("; "),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_validation_rejects_junk() {
        assert!(WikidataClient::check_id("Q42").is_ok());
        assert!(WikidataClient::check_id("P106").is_ok());
        for bad in ["", "Q", "42", "Q42x", "X42", "Q-1"] {
            assert!(WikidataClient::check_id(bad).is_err(), "{bad} should be rejected");
        }
    }

    #[test]
    fn cache_round_trips_by_url_hash() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache { dir: dir.path().to_path_buf() };
        assert!(cache.get("http://x/a").is_none());
        cache.put("http://x/a", "{\"k\":1}");
        assert_eq!(cache.get("http://x/a").unwrap(), "{\"k\":1}");
        assert!(cache.get("http://x/b").is_none());
    }

    #[test]
    fn cached_replies_bypass_the_network() {
        let dir = tempfile::tempdir().unwrap();
        let client =
            WikidataClient::new("http://127.0.0.1:1", Duration::from_millis(200), Some(dir.path()));
        let url = client.api("action=wbsearchentities&language=en&uselang=en&type=item&limit=5&search=Douglas%20Adams");
        let canned = r#"{"search":[{"id":"Q42","label":"Douglas Adams","description":"English writer"}]}"#;
        client.cache.as_ref().unwrap().put(&url, canned);

        let before = net::requests_total();
        let hits = client.search_entity("Douglas Adams").unwrap();
        assert_eq!(net::requests_total(), before, "served from cache");
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].entity_id, "Q42");
    }

    #[test]
    fn value_rendering_covers_the_datatype_zoo() {
        let dir = tempfile::tempdir().unwrap();
        let client =
            WikidataClient::new("http://127.0.0.1:1", Duration::from_millis(200), Some(dir.path()));
        let render = |v: Value| client.render_value(&v).unwrap();
        assert_eq!(render(serde_json::json!({"type":"string","value":"hello"})), "hello");
        assert_eq!(
            render(serde_json::json!({"type":"time","value":{"time":"+1952-03-11T00:00:00Z"}})),
            "1952-03-11"
        );
        assert_eq!(
            render(serde_json::json!({"type":"quantity","value":{"amount":"+42"}})),
            "42"
        );
        assert_eq!(
            render(serde_json::json!({"type":"monolingualtext","value":{"text":"mostly harmless"}})),
            "mostly harmless"
        );
        assert!(client
            .render_value(&serde_json::json!({"type":"martian","value":{}}))
            .is_err());
    }
}
