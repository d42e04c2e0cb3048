//! Strategy names, per-strategy knobs, and the strategy/benchmark matrix.

use serde::{Deserialize, Serialize};

use crate::bench::Benchmark;
use crate::codec::DEFAULT_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    Control,
    Cot,
    Sc,
    ScCot,
    Tot,
    Mad,
    Reflection,
    Cp,
    Cove1,
    Cove2,
    Kgr,
    Ddga,
}

impl StrategyName {
    pub const ALL: [StrategyName; 12] = [
        StrategyName::Control,
        StrategyName::Cot,
        StrategyName::Sc,
        StrategyName::ScCot,
        StrategyName::Tot,
        StrategyName::Mad,
        StrategyName::Reflection,
        StrategyName::Cp,
        StrategyName::Cove1,
        StrategyName::Cove2,
        StrategyName::Kgr,
        StrategyName::Ddga,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StrategyName::Control => "control",
            StrategyName::Cot => "cot",
            StrategyName::Sc => "sc",
            StrategyName::ScCot => "sc_cot",
            StrategyName::Tot => "tot",
            StrategyName::Mad => "mad",
            StrategyName::Reflection => "reflection",
            StrategyName::Cp => "cp",
            StrategyName::Cove1 => "cove1",
            StrategyName::Cove2 => "cove2",
            StrategyName::Kgr => "kgr",
            StrategyName::Ddga => "ddga",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|name| name.as_str() == s)
    }

    /// Which benchmarks each strategy runs on. Control runs everywhere;
    /// the rest follow the per-benchmark assignments.
    pub fn supports(&self, benchmark: Benchmark) -> bool {
        use StrategyName::*;
        match benchmark {
            Benchmark::Gsm8k => matches!(self, Control | Cot | Sc | ScCot | Tot | Mad),
            Benchmark::Triviaqa => matches!(self, Control | Sc | Cp | Kgr | Cove1 | Mad | Ddga),
            Benchmark::Mmlu => matches!(self, Control | Sc | Cp | Mad | Reflection | Cove2),
        }
    }
}

impl std::fmt::Display for StrategyName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn default_temperature() -> f64 {
    0.2
}

fn default_sample_count() -> usize {
    5
}

fn default_debate_rounds() -> usize {
    10
}

fn default_debater_count() -> usize {
    2
}

fn default_tolerance() -> u32 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyConfig {
    pub name: StrategyName,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_sample_count")]
    pub sample_count: usize,
    #[serde(default = "default_debate_rounds")]
    pub max_debate_rounds: usize,
    #[serde(default = "default_debater_count")]
    pub debater_count: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: u32,
}

impl StrategyConfig {
    pub fn named(name: StrategyName) -> Self {
        StrategyConfig {
            name,
            temperature: default_temperature(),
            sample_count: default_sample_count(),
            max_debate_rounds: default_debate_rounds(),
            debater_count: default_debater_count(),
            tolerance: default_tolerance(),
        }
    }

    pub fn at_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(format!("temperature {} outside [0, 2]", self.temperature));
        }
        if self.sample_count == 0 {
            return Err("sample_count must be positive".into());
        }
        if matches!(self.name, StrategyName::Sc | StrategyName::ScCot)
            && self.sample_count % 2 == 0
        {
            return Err(format!(
                "{} needs an odd sample_count to avoid vote ties, got {}",
                self.name, self.sample_count
            ));
        }
        if self.max_debate_rounds == 0 {
            return Err("max_debate_rounds must be positive".into());
        }
        if self.debater_count != 2 {
            return Err(format!("debater_count is fixed at 2, got {}", self.debater_count));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip_through_strings_and_serde() {
        for name in StrategyName::ALL {
            assert_eq!(StrategyName::parse(name.as_str()), Some(name));
            let json = serde_json::to_string(&name).unwrap();
            assert_eq!(json, format!("\"{}\"", name.as_str()));
            assert_eq!(serde_json::from_str::<StrategyName>(&json).unwrap(), name);
        }
        assert_eq!(StrategyName::parse("nope"), None);
    }

    #[test]
    fn benchmark_matrix_matches_assignments() {
        use StrategyName::*;
        let expect = [
            (Benchmark::Gsm8k, vec![Control, Cot, Sc, ScCot, Tot, Mad]),
            (Benchmark::Triviaqa, vec![Control, Sc, Cp, Kgr, Cove1, Mad, Ddga]),
            (Benchmark::Mmlu, vec![Control, Sc, Cp, Mad, Reflection, Cove2]),
        ];
        for (benchmark, allowed) in expect {
            for name in StrategyName::ALL {
                assert_eq!(
                    name.supports(benchmark),
                    allowed.contains(&name),
                    "{name} on {benchmark}"
                );
            }
        }
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = StrategyConfig::named(StrategyName::Sc);
        assert_eq!(cfg.sample_count, 5);
        assert_eq!(cfg.max_debate_rounds, 10);
        assert_eq!(cfg.debater_count, 2);
        assert!(cfg.validate().is_ok());

        let mut even = cfg.clone();
        even.sample_count = 4;
        assert!(even.validate().unwrap_err().contains("odd"));

        let mut three = StrategyConfig::named(StrategyName::Mad);
        three.debater_count = 3;
        assert!(three.validate().unwrap_err().contains("fixed at 2"));

        let parsed: StrategyConfig = serde_json::from_str(r#"{"name": "cp"}"#).unwrap();
        assert_eq!(parsed, StrategyConfig::named(StrategyName::Cp));
    }
}
