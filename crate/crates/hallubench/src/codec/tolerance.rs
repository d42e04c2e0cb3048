//! Re-ask loop around complete + parse.

use thiserror::Error;

use crate::gateway::{CompletionRequest, GatewayError, Session};
use crate::seed;

use super::parse::{parse, ParseFailure, ParseSpec, ParsedAnswer};

/// Successful ask: the parsed answer, how many prompts it took, and the
/// raw text that finally parsed.
#[derive(Debug, Clone, PartialEq)]
pub struct AskOutcome {
    pub answer: ParsedAnswer,
    pub attempts_used: u32,
    pub raw: String,
}

#[derive(Debug, Error)]
pub enum AskError {
    /// Every attempt failed to parse; carries the attempt count (tolerance
    /// + 1) and the last parse failure.
    #[error("no parseable answer after {attempts} attempts: {last_failure}")]
    ToleranceExceeded { attempts: u32, last_failure: ParseFailure },
    #[error(transparent)]
    Gateway(#[from] GatewayError),
}

/// Ask until the reply parses, re-asking with the identical prompt up to
/// `spec.tolerance` additional times. Each attempt is one prompt toward
/// cost. Attempt k > 0 derives its decoding seed from the request's seed
/// so retries are distinct draws but the whole loop stays replayable.
pub fn ask_with_tolerance(
    session: &Session<'_>,
    request: &CompletionRequest,
    spec: &ParseSpec,
) -> Result<AskOutcome, AskError> {
    let mut last_failure = ParseFailure::MissingMarker;
    for attempt in 0..=spec.tolerance {
        let mut attempt_request = request.clone();
        if attempt > 0 {
            if let Some(base) = request.seed {
                attempt_request.seed = Some(seed::child_seed(base, u64::from(attempt)));
            }
        }
        let response = session.complete(&attempt_request)?;
        match parse(&response.content, spec) {
            Ok(answer) => {
                return Ok(AskOutcome { answer, attempts_used: attempt + 1, raw: response.content })
            }
            Err(failure) => last_failure = failure,
        }
    }
    Err(AskError::ToleranceExceeded { attempts: spec.tolerance + 1, last_failure })
}
