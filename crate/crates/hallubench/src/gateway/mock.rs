//! Deterministic scripted/statistical fake backend.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed;

use super::types::{CompletionRequest, CompletionResponse, FinishReason};

/// How a rule decides whether it applies to a request; matchers scan the
/// concatenated contents of every message in the conversation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Matcher {
    Substring(String),
    Regex(String),
}

/// One outcome of a statistical rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedResponse {
    pub text: String,
    pub probability: f64,
}

/// A prompt-matching rule: either a fixed response list consumed in order
/// (then cycled) or a probability distribution sampled per call.
///
/// Distributions keep their declared order; sampling walks the cumulative
/// sum with a single uniform draw, so reweighting a prefix of the list
/// never changes which outcome a given draw maps to further down.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MockRule {
    pub matcher: Matcher,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub responses: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub distribution: Vec<WeightedResponse>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MockMode {
    Scripted,
    Statistical,
}

fn default_mode() -> MockMode {
    MockMode::Scripted
}

/// Declarative script for the mock backend. First matching rule wins;
/// no rule matching falls back to `fallback`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MockScript {
    #[serde(default = "default_mode")]
    pub mode: MockMode,
    #[serde(default)]
    pub rng_seed_base: u64,
    pub fallback: String,
    #[serde(default)]
    pub rules: Vec<MockRule>,
}

#[derive(Debug, Error)]
pub enum MockScriptError {
    #[error("rule {0}: invalid regex: {1}")]
    BadRegex(usize, regex::Error),
    #[error("rule {0}: must define exactly one of responses or distribution")]
    AmbiguousRule(usize),
    #[error("rule {0}: distribution {1}")]
    BadDistribution(usize, String),
    #[error("rule {0}: distributions require statistical mode")]
    DistributionInScriptedMode(usize),
    #[error("fallback response is empty")]
    EmptyFallback,
    #[error("rule {0}: empty response text at position {1}")]
    EmptyResponse(usize, usize),
}

impl MockScript {
    pub fn validate(&self) -> Result<(), MockScriptError> {
        if self.fallback.is_empty() {
            return Err(MockScriptError::EmptyFallback);
        }
        for (i, rule) in self.rules.iter().enumerate() {
            if let Matcher::Regex(pattern) = &rule.matcher {
                Regex::new(pattern).map_err(|e| MockScriptError::BadRegex(i, e))?;
            }
            match (rule.responses.is_empty(), rule.distribution.is_empty()) {
                (false, true) => {
                    for (j, r) in rule.responses.iter().enumerate() {
                        if r.is_empty() {
                            return Err(MockScriptError::EmptyResponse(i, j));
                        }
                    }
                }
                (true, false) => {
                    if self.mode == MockMode::Scripted {
                        return Err(MockScriptError::DistributionInScriptedMode(i));
                    }
                    let mut total = 0.0;
                    for w in &rule.distribution {
                        if w.probability < 0.0 {
                            return Err(MockScriptError::BadDistribution(
                                i,
                                format!("has negative probability {}", w.probability),
                            ));
                        }
                        if w.text.is_empty() {
                            return Err(MockScriptError::BadDistribution(i, "has empty outcome text".into()));
                        }
                        total += w.probability;
                    }
                    if (total - 1.0).abs() > 1e-9 {
                        return Err(MockScriptError::BadDistribution(i, format!("sums to {total}, not 1")));
                    }
                }
                _ => return Err(MockScriptError::AmbiguousRule(i)),
            }
        }
        Ok(())
    }
}

enum CompiledMatcher {
    Substring(String),
    Regex(Regex),
}

impl CompiledMatcher {
    fn matches(&self, text: &str) -> bool {
        match self {
            CompiledMatcher::Substring(s) => text.contains(s.as_str()),
            CompiledMatcher::Regex(r) => r.is_match(text),
        }
    }
}

struct CompiledRule {
    matcher: CompiledMatcher,
    responses: Vec<String>,
    distribution: Vec<WeightedResponse>,
    cursor: Mutex<usize>,
}

/// Executable form of a [`MockScript`].
///
/// Scripted rules hold a per-rule cursor; statistical rules hold no state
/// at all — each draw is keyed by `rng_seed_base` and the request seed (or
/// a prompt hash when no seed is given), so output is independent of call
/// interleaving.
pub struct MockBackend {
    rng_seed_base: u64,
    fallback: String,
    rules: Vec<CompiledRule>,
    calls: AtomicU64,
}

impl MockBackend {
    pub fn new(script: &MockScript) -> Result<Self, MockScriptError> {
        script.validate()?;
        let rules = script
            .rules
            .iter()
            .map(|rule| CompiledRule {
                matcher: match &rule.matcher {
                    Matcher::Substring(s) => CompiledMatcher::Substring(s.clone()),
                    Matcher::Regex(p) => CompiledMatcher::Regex(Regex::new(p).expect("validated")),
                },
                responses: rule.responses.clone(),
                distribution: rule.distribution.clone(),
                cursor: Mutex::new(0),
            })
            .collect();
        Ok(MockBackend {
            rng_seed_base: script.rng_seed_base,
            fallback: script.fallback.clone(),
            rules,
            calls: AtomicU64::new(0),
        })
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }

    fn draw(&self, distribution: &[WeightedResponse], salt: u64) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::child_seed(self.rng_seed_base, salt));
        let u: f64 = rng.gen();
        let mut cumulative = 0.0;
        for w in distribution {
            cumulative += w.probability;
            if u < cumulative {
                return w.text.clone();
            }
        }
        distribution.last().expect("validated non-empty").text.clone()
    }

    pub fn respond(&self, request: &CompletionRequest) -> CompletionResponse {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let text = request.joined_text();
        let content = self
            .rules
            .iter()
            .find(|r| r.matcher.matches(&text))
            .map(|rule| {
                if !rule.responses.is_empty() {
                    let mut cursor = rule.cursor.lock().unwrap();
                    let reply = rule.responses[*cursor % rule.responses.len()].clone();
                    *cursor += 1;
                    reply
                } else {
                    let salt = request.seed.unwrap_or_else(|| seed::mix(&[text.as_bytes()]));
                    self.draw(&rule.distribution, salt)
                }
            })
            .unwrap_or_else(|| self.fallback.clone());
        CompletionResponse { content, finish_reason: FinishReason::Stop, usage: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::types::ChatMessage;

    fn req(text: &str) -> CompletionRequest {
        CompletionRequest::new(vec![ChatMessage::user(text)], 0.2)
    }

    fn scripted(rules: Vec<MockRule>) -> MockScript {
        MockScript { mode: MockMode::Scripted, rng_seed_base: 0, fallback: "fallback".into(), rules }
    }

    #[test]
    fn first_matching_rule_wins_and_cycles() {
        let script = scripted(vec![
            MockRule {
                matcher: Matcher::Substring("2+2".into()),
                responses: vec!["4".into(), "5".into()],
                distribution: vec![],
            },
            MockRule {
                matcher: Matcher::Substring("2".into()),
                responses: vec!["shadowed".into()],
                distribution: vec![],
            },
        ]);
        let backend = MockBackend::new(&script).unwrap();
        assert_eq!(backend.respond(&req("what is 2+2")).content, "4");
        assert_eq!(backend.respond(&req("what is 2+2")).content, "5");
        assert_eq!(backend.respond(&req("what is 2+2")).content, "4");
        assert_eq!(backend.respond(&req("unmatched")).content, "fallback");
        assert_eq!(backend.calls(), 4);
    }

    #[test]
    fn regex_matcher_and_multi_message_scan() {
        let script = scripted(vec![MockRule {
            matcher: Matcher::Regex(r"cats?\b".into()),
            responses: vec!["meow".into()],
            distribution: vec![],
        }]);
        let backend = MockBackend::new(&script).unwrap();
        let request = CompletionRequest::new(
            vec![ChatMessage::system("you like cats"), ChatMessage::user("speak")],
            0.2,
        );
        assert_eq!(backend.respond(&request).content, "meow");
    }

    #[test]
    fn statistical_draws_depend_only_on_seed() {
        let script = MockScript {
            mode: MockMode::Statistical,
            rng_seed_base: 11,
            fallback: "fallback".into(),
            rules: vec![MockRule {
                matcher: Matcher::Substring("q".into()),
                responses: vec![],
                distribution: vec![
                    WeightedResponse { text: "a".into(), probability: 0.6 },
                    WeightedResponse { text: "b".into(), probability: 0.4 },
                ],
            }],
        };
        let backend = MockBackend::new(&script).unwrap();
        let with_seed = |s: u64| backend.respond(&req("q").with_seed(s)).content;
        let first: Vec<String> = (0..50).map(with_seed).collect();
        // Replay in reverse order: same seeds, same answers.
        let replayed: Vec<String> = (0..50).rev().map(with_seed).collect();
        let mut reversed = first.clone();
        reversed.reverse();
        assert_eq!(replayed, reversed);
        assert!(first.iter().any(|c| c == "a") && first.iter().any(|c| c == "b"));

        // A fresh backend built from the same script agrees draw-for-draw.
        let twin = MockBackend::new(&script).unwrap();
        let again: Vec<String> = (0..50).map(|s| twin.respond(&req("q").with_seed(s)).content).collect();
        assert_eq!(again, first);
    }

    #[test]
    fn statistical_frequencies_track_distribution() {
        let script = MockScript {
            mode: MockMode::Statistical,
            rng_seed_base: 3,
            fallback: "fallback".into(),
            rules: vec![MockRule {
                matcher: Matcher::Substring("q".into()),
                responses: vec![],
                distribution: vec![
                    WeightedResponse { text: "A".into(), probability: 0.6 },
                    WeightedResponse { text: "B".into(), probability: 0.4 },
                ],
            }],
        };
        let backend = MockBackend::new(&script).unwrap();
        let hits = (0..10_000)
            .filter(|&s| backend.respond(&req("q").with_seed(s)).content == "A")
            .count() as f64;
        let freq = hits / 10_000.0;
        assert!((freq - 0.6).abs() < 0.02, "frequency {freq} strayed from 0.6");
    }

    #[test]
    fn validation_rejects_bad_scripts() {
        let mut script = scripted(vec![MockRule {
            matcher: Matcher::Regex("(".into()),
            responses: vec!["x".into()],
            distribution: vec![],
        }]);
        assert!(matches!(script.validate(), Err(MockScriptError::BadRegex(0, _))));

        script.rules[0].matcher = Matcher::Substring("ok".into());
        script.rules[0].responses.clear();
        assert!(matches!(script.validate(), Err(MockScriptError::AmbiguousRule(0))));

        script.rules[0].distribution = vec![WeightedResponse { text: "a".into(), probability: 0.5 }];
        assert!(matches!(script.validate(), Err(MockScriptError::DistributionInScriptedMode(0))));

        script.mode = MockMode::Statistical;
        assert!(matches!(script.validate(), Err(MockScriptError::BadDistribution(0, _))));

        script.rules[0].distribution[0].probability = 1.0;
        assert!(script.validate().is_ok());

        script.fallback.clear();
        assert!(matches!(script.validate(), Err(MockScriptError::EmptyFallback)));
    }

    #[test]
    fn script_roundtrips_through_json() {
        let script = MockScript {
            mode: MockMode::Statistical,
            rng_seed_base: 42,
            fallback: "f".into(),
            rules: vec![
                MockRule {
                    matcher: Matcher::Substring("x".into()),
                    responses: vec!["y".into()],
                    distribution: vec![],
                },
                MockRule {
                    matcher: Matcher::Regex("z+".into()),
                    responses: vec![],
                    distribution: vec![WeightedResponse { text: "w".into(), probability: 1.0 }],
                },
            ],
        };
        let text = serde_json::to_string_pretty(&script).unwrap();
        let back: MockScript = serde_json::from_str(&text).unwrap();
        assert_eq!(back, script);
    }
}
