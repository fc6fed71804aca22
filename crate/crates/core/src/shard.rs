//! Window evaluation split across worker threads.
//!
//! Windows are cut into contiguous sub-windows, each evaluated on its own,
//! and the per-shard outputs are concatenated in ascending order. The
//! result never depends on the number of workers.

use crate::prime_engine::PrimeWindow;

/// Sub-windows handed out per worker; uneven per-prime cost (most scans
/// are O(p) per prime) makes a few extra shards worthwhile.
const SHARDS_PER_JOB: usize = 8;

/// Evaluates `f` at every prime of `window`, in ascending prime order.
///
/// `jobs <= 1` runs on the calling thread.
pub fn map_primes<T, F>(window: PrimeWindow, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    if jobs <= 1 {
        return window.primes().into_iter().map(f).collect();
    }
    run_sharded(window, jobs, f)
}

#[cfg(feature = "parallel")]
fn run_sharded<T, F>(window: PrimeWindow, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;

    let shards = window.shards(jobs * SHARDS_PER_JOB);
    let eval = || -> Vec<Vec<T>> {
        shards
            .par_iter()
            .map(|w| w.primes().into_iter().map(&f).collect())
            .collect()
    };
    let parts = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(eval),
        Err(_) => eval(),
    };
    parts.into_iter().flatten().collect()
}

#[cfg(not(feature = "parallel"))]
fn run_sharded<T, F>(window: PrimeWindow, jobs: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    window
        .shards(jobs * SHARDS_PER_JOB)
        .into_iter()
        .flat_map(|w| w.primes().into_iter().map(&f).collect::<Vec<_>>())
        .collect()
}

/// Primes of `window` satisfying `keep`, ascending.
pub fn filter_primes<F>(window: PrimeWindow, jobs: usize, keep: F) -> Vec<u64>
where
    F: Fn(u64) -> bool + Sync + Send,
{
    map_primes(window, jobs, |p| keep(p).then_some(p))
        .into_iter()
        .flatten()
        .collect()
}
