//! Majority vote over parsed sample answers.

use thiserror::Error;

use crate::codec::ParsedAnswer;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VoteError {
    #[error("no parseable samples to vote over")]
    EmptyBallot,
}

/// Returns the modal answer by canonical value. Ties break to the value
/// whose first occurrence comes earliest in sample order; the returned
/// answer is that first occurrence.
pub fn majority_vote(ballot: &[ParsedAnswer]) -> Result<ParsedAnswer, VoteError> {
    if ballot.is_empty() {
        return Err(VoteError::EmptyBallot);
    }
    // (canonical value, count, index of first occurrence)
    let mut tallies: Vec<(&str, usize, usize)> = Vec::new();
    for (index, answer) in ballot.iter().enumerate() {
        match tallies.iter_mut().find(|(value, _, _)| *value == answer.canonical()) {
            Some((_, count, _)) => *count += 1,
            None => tallies.push((answer.canonical(), 1, index)),
        }
    }
    let winner = tallies
        .iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
        .expect("ballot is non-empty");
    Ok(ballot[winner.2].clone())
}
