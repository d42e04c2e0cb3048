//! Aggregate counters, multi-run averaging, and the sampled-answer
//! ledgers behind the Top-N and occurrence reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::grade::Grade;

/// One run's counters. Everything is `f64` so multi-run averages keep
/// their fractional parts; rounding happens only at report emission.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunAggregate {
    pub total: f64,
    pub graded: f64,
    pub correct: f64,
    pub hallucinated: f64,
    pub abstained: f64,
    pub invalid: f64,
    pub accuracy: f64,
    pub avg_cost: f64,
}

impl RunAggregate {
    /// The bookkeeping identities every report row must satisfy:
    /// total = graded + abstained + invalid and graded = correct +
    /// hallucinated. (Accuracy is deliberately not checked: after
    /// multi-run averaging it is a mean of ratios, not a ratio of means.)
    pub fn assert_accounting(&self) {
        let identity = |lhs: f64, rhs: f64, what: &str| {
            assert!(
                (lhs - rhs).abs() < 1e-6,
                "accounting identity violated: {what} ({lhs} vs {rhs})"
            );
        };
        identity(self.total, self.graded + self.abstained + self.invalid, "total");
        identity(self.graded, self.correct + self.hallucinated, "graded");
    }
}

/// Rounds to two decimals; used when writing reports, never while computing.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub fn aggregate(grades: &[Grade], costs: &[u64]) -> RunAggregate {
    assert_eq!(grades.len(), costs.len(), "one prompt cost per graded query");
    let count = |g: Grade| grades.iter().filter(|&&x| x == g).count() as f64;
    let correct = count(Grade::Correct);
    let hallucinated = count(Grade::Hallucinated);
    let graded = correct + hallucinated;
    let total = grades.len() as f64;
    let accuracy = if graded == 0.0 { 0.0 } else { 100.0 * correct / graded };
    let avg_cost = if costs.is_empty() {
        0.0
    } else {
        costs.iter().map(|&c| c as f64).sum::<f64>() / costs.len() as f64
    };
    RunAggregate {
        total,
        graded,
        correct,
        hallucinated,
        abstained: count(Grade::Abstained),
        invalid: count(Grade::Invalid),
        accuracy,
        avg_cost,
    }
}

/// Field-wise arithmetic mean over runs, accuracy included.
pub fn average_runs(runs: &[RunAggregate]) -> RunAggregate {
    assert!(!runs.is_empty(), "cannot average zero runs");
    let n = runs.len() as f64;
    let mean = |f: fn(&RunAggregate) -> f64| runs.iter().map(f).sum::<f64>() / n;
    RunAggregate {
        total: mean(|r| r.total),
        graded: mean(|r| r.graded),
        correct: mean(|r| r.correct),
        hallucinated: mean(|r| r.hallucinated),
        abstained: mean(|r| r.abstained),
        invalid: mean(|r| r.invalid),
        accuracy: mean(|r| r.accuracy),
        avg_cost: mean(|r| r.avg_cost),
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("sample row has {found} entries, ledger width is {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Per-query correctness of each sampled answer, in sample order. All rows
/// share one width so Top-N positions line up across queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleLedger {
    width: usize,
    rows: Vec<Vec<bool>>,
}

impl SampleLedger {
    pub fn new(width: usize) -> Self {
        assert!(width > 0, "ledger width must be positive");
        SampleLedger { width, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<bool>) -> Result<(), LedgerError> {
        if row.len() != self.width {
            return Err(LedgerError::LengthMismatch { expected: self.width, found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn from_rows(width: usize, rows: &[&[bool]]) -> Result<Self, LedgerError> {
        let mut ledger = SampleLedger::new(width);
        for row in rows {
            ledger.push(row.to_vec())?;
        }
        Ok(ledger)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }
}

/// Entry N-1 is the percentage of queries whose first N samples contain at
/// least one correct answer. An empty ledger yields all zeros.
pub fn top_n_accuracy(ledger: &SampleLedger) -> Vec<f64> {
    let mut out = vec![0.0; ledger.width()];
    if ledger.is_empty() {
        return out;
    }
    let queries = ledger.len() as f64;
    for (n, slot) in out.iter_mut().enumerate() {
        let hits = ledger.rows().iter().filter(|row| row[..=n].iter().any(|&b| b)).count();
        *slot = 100.0 * hits as f64 / queries;
    }
    out
}

/// Bucket k counts the queries with exactly k correct samples; indices run
/// 0..=width and the buckets sum to the query count.
pub fn occurrence_histogram(ledger: &SampleLedger) -> Vec<u64> {
    let mut buckets = vec![0u64; ledger.width() + 1];
    for row in ledger.rows() {
        buckets[row.iter().filter(|&&b| b).count()] += 1;
    }
    buckets
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SubjectStat {
    pub graded: f64,
    pub correct: f64,
    pub accuracy: f64,
}

/// Per-subject accuracy over graded outcomes; covers exactly the subjects
/// that appear in the input.
pub fn per_subject<'a>(
    rows: impl IntoIterator<Item = (&'a str, Grade)>,
) -> BTreeMap<String, SubjectStat> {
    let mut map: BTreeMap<String, SubjectStat> = BTreeMap::new();
    for (subject, grade) in rows {
        let stat = map.entry(subject.to_string()).or_default();
        match grade {
            Grade::Correct => {
                stat.graded += 1.0;
                stat.correct += 1.0;
            }
            Grade::Hallucinated => stat.graded += 1.0,
            Grade::Abstained | Grade::Invalid => {}
        }
    }
    for stat in map.values_mut() {
        stat.accuracy =
            if stat.graded == 0.0 { 0.0 } else { 100.0 * stat.correct / stat.graded };
    }
    map
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ToolCounts {
    pub successful: u64,
    pub unsuccessful: u64,
}

/// Running tallies of tool-call outcomes, keyed by tool name.
pub type ToolTally = BTreeMap<String, ToolCounts>;

pub fn merge_tool_tallies(into: &mut ToolTally, from: &ToolTally) {
    for (name, counts) in from {
        let entry = into.entry(name.clone()).or_default();
        entry.successful += counts.successful;
        entry.unsuccessful += counts.unsuccessful;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grades(correct: usize, hallucinated: usize, abstained: usize, invalid: usize) -> Vec<Grade> {
        let mut out = vec![Grade::Correct; correct];
        out.extend(vec![Grade::Hallucinated; hallucinated]);
        out.extend(vec![Grade::Abstained; abstained]);
        out.extend(vec![Grade::Invalid; invalid]);
        out
    }

    #[test]
    fn anchor_accuracies_reproduce_to_two_decimals() {
        let g = grades(471, 100, 0, 0);
        let agg = aggregate(&g, &vec![5; g.len()]);
        assert_eq!(round2(agg.accuracy), 82.49);
        assert_eq!(agg.graded, 571.0);
        assert_eq!(agg.avg_cost, 5.0);

        let g = grades(664, 332, 0, 4);
        let agg = aggregate(&g, &vec![1; g.len()]);
        assert_eq!(round2(agg.accuracy), 66.67);
        agg.assert_accounting();
    }

    #[test]
    fn all_abstained_grades_to_zero_accuracy() {
        let g = grades(0, 0, 7, 0);
        let agg = aggregate(&g, &vec![5; 7]);
        assert_eq!(agg.graded, 0.0);
        assert_eq!(agg.accuracy, 0.0);
        assert_eq!(agg.hallucinated, 0.0);
        agg.assert_accounting();
    }

    #[test]
    fn accounting_identity_holds_on_random_mixes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1_000 {
            let g = grades(
                rng.gen_range(0..50),
                rng.gen_range(0..50),
                rng.gen_range(0..50),
                rng.gen_range(0..50),
            );
            let costs: Vec<u64> = (0..g.len()).map(|_| rng.gen_range(1..20)).collect();
            aggregate(&g, &costs).assert_accounting();
        }
    }

    #[test]
    fn three_run_average_reproduces_fractional_mean() {
        let runs: Vec<RunAggregate> = [1030.0, 1031.0, 1031.0]
            .iter()
            .map(|&correct| RunAggregate {
                total: 1319.0,
                graded: 1319.0,
                correct,
                hallucinated: 1319.0 - correct,
                accuracy: 100.0 * correct / 1319.0,
                avg_cost: 1.0,
                ..Default::default()
            })
            .collect();
        let mean = average_runs(&runs);
        assert_eq!(round2(mean.correct), 1030.67);
        mean.assert_accounting();
        assert!((mean.accuracy - 100.0 * (1030.0 + 1031.0 + 1031.0) / 3.0 / 1319.0).abs() < 1e-9);
    }

    #[test]
    fn single_run_average_is_identity() {
        let run = aggregate(&grades(3, 1, 1, 0), &[1, 1, 1, 1, 1]);
        assert_eq!(average_runs(&[run.clone()]), run);
    }

    #[test]
    fn ledger_rejects_ragged_rows() {
        let mut ledger = SampleLedger::new(5);
        ledger.push(vec![true; 5]).unwrap();
        assert_eq!(
            ledger.push(vec![true; 4]),
            Err(LedgerError::LengthMismatch { expected: 5, found: 4 })
        );
    }

    #[test]
    fn hand_counted_top_n_fixture() {
        let ledger = SampleLedger::from_rows(
            5,
            &[
                &[true, true, false, false, false],
                &[false, false, false, false, true],
                &[false, false, false, false, false],
            ],
        )
        .unwrap();
        let top = top_n_accuracy(&ledger);
        assert_eq!(round2(top[0]), 33.33);
        assert_eq!(round2(top[4]), 66.67);
        assert!(top.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn saturated_ledger_is_all_hundreds() {
        let ledger = SampleLedger::from_rows(5, &[&[true; 5], &[true; 5]]).unwrap();
        assert_eq!(top_n_accuracy(&ledger), vec![100.0; 5]);
        assert_eq!(occurrence_histogram(&ledger), vec![0, 0, 0, 0, 0, 2]);
    }

    #[test]
    fn empty_ledger_yields_zeros() {
        let ledger = SampleLedger::new(5);
        assert_eq!(top_n_accuracy(&ledger), vec![0.0; 5]);
        assert_eq!(occurrence_histogram(&ledger), vec![0; 6]);
    }

    #[test]
    fn top_n_is_monotone_and_histogram_conserves_mass_on_random_ledgers() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let mut ledger = SampleLedger::new(5);
            let queries = rng.gen_range(1..40);
            for _ in 0..queries {
                ledger.push((0..5).map(|_| rng.gen_bool(0.4)).collect()).unwrap();
            }
            let top = top_n_accuracy(&ledger);
            assert!(top.windows(2).all(|w| w[0] <= w[1]), "{top:?}");
            let histogram = occurrence_histogram(&ledger);
            assert_eq!(histogram.iter().sum::<u64>(), queries as u64);
        }
    }

    #[test]
    fn top_five_dominates_majority_vote_accuracy() {
        use crate::codec::{AnswerValue, ParsedAnswer};
        use crate::strategy::majority_vote;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1_000 {
            let queries = rng.gen_range(1..20);
            let mut ledger = SampleLedger::new(5);
            let mut vote_correct = 0usize;
            for _ in 0..queries {
                let values: Vec<String> =
                    (0..5).map(|_| rng.gen_range(0..4).to_string()).collect();
                ledger.push(values.iter().map(|v| v == "0").collect()).unwrap();
                let ballot: Vec<ParsedAnswer> = values
                    .iter()
                    .map(|v| ParsedAnswer {
                        value: AnswerValue::Numeric(v.clone()),
                        reasoning_steps: Vec::new(),
                    })
                    .collect();
                if majority_vote(&ballot).unwrap().canonical() == "0" {
                    vote_correct += 1;
                }
            }
            let vote_accuracy = 100.0 * vote_correct as f64 / queries as f64;
            let top5 = top_n_accuracy(&ledger)[4];
            assert!(
                top5 >= vote_accuracy - 1e-9,
                "top5 {top5} < vote {vote_accuracy}"
            );
        }
    }

    #[test]
    fn subject_map_covers_only_present_subjects() {
        let map = per_subject([
            ("botany", Grade::Correct),
            ("botany", Grade::Hallucinated),
            ("botany", Grade::Abstained),
            ("navigation", Grade::Correct),
        ]);
        assert_eq!(map.len(), 2);
        assert_eq!(map["botany"].graded, 2.0);
        assert_eq!(map["botany"].accuracy, 50.0);
        assert_eq!(map["navigation"].accuracy, 100.0);
    }

    #[test]
    fn tool_tallies_merge_by_name() {
        let mut into = ToolTally::new();
        let mut from = ToolTally::new();
        from.insert("exec_code".into(), ToolCounts { successful: 1, unsuccessful: 2 });
        merge_tool_tallies(&mut into, &from);
        merge_tool_tallies(&mut into, &from);
        assert_eq!(into["exec_code"], ToolCounts { successful: 2, unsuccessful: 4 });
    }
}
