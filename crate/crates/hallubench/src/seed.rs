//! Stable seed derivation shared by the mock backend, sampling, and the runner.
//!
//! All hashing is SHA-256 based so derived seeds are identical across
//! platforms, processes, and releases; `DefaultHasher` makes no such promise.

use sha2::{Digest, Sha256};

/// Hashes a sequence of byte chunks into a u64 (first 8 bytes of SHA-256).
///
/// Chunks are length-prefixed so `["ab","c"]` and `["a","bc"]` differ.
pub fn mix(parts: &[&[u8]]) -> u64 {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// Derives a child seed from a parent seed and an index (sample number,
/// retry attempt, debater slot, ...).
pub fn child_seed(parent: u64, index: u64) -> u64 {
    mix(&[&parent.to_le_bytes(), &index.to_le_bytes()])
}

/// Derives the base seed for one (benchmark, query, strategy, temperature,
/// run) grid cell so reordering and parallelism cannot change outcomes.
pub fn query_seed(
    rng_seed: u64,
    benchmark: &str,
    query_id: &str,
    strategy: &str,
    temperature: f64,
    run_index: u32,
) -> u64 {
    mix(&[
        &rng_seed.to_le_bytes(),
        benchmark.as_bytes(),
        query_id.as_bytes(),
        strategy.as_bytes(),
        &temperature.to_le_bytes(),
        &run_index.to_le_bytes(),
    ])
}

/// Hex SHA-256 of a byte string; used for plan hashes and on-disk cache keys.
pub fn sha256_hex(data: &[u8]) -> String {
    let digest = Sha256::digest(data);
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
