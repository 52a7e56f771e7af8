//! Thread-count control.
//!
//! Every algorithm in this crate is deterministic regardless of worker
//! count (parallel maps preserve order; accumulation orders are fixed),
//! so this helper exists to pin a count: single-threaded runs serve as
//! the reference in determinism checks, and batch jobs can bound their
//! parallelism.

use crate::error::{Error, Result};

/// Runs `f` inside a dedicated pool of `threads` workers; 0 means the
/// global default pool.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if threads == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build a {threads}-thread pool: {e}")))?;
    Ok(pool.install(f))
}
