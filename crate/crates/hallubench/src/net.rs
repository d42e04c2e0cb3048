//! Process-wide tally of outbound HTTP requests.
//!
//! Every live client routes through [`count_request`] right before hitting
//! the network, so tests that must stay offline can assert the counter
//! never moved.

use std::sync::atomic::{AtomicU64, Ordering};

static HTTP_REQUESTS: AtomicU64 = AtomicU64::new(0);

/// Record one outbound request; returns the new total.
pub fn count_request() -> u64 {
    HTTP_REQUESTS.fetch_add(1, Ordering::SeqCst) + 1
}

/// Outbound requests made by this process so far.
pub fn requests_total() -> u64 {
    HTTP_REQUESTS.load(Ordering::SeqCst)
}
