//! Data-parallel execution lane with a deterministic reduction order.
//!
//! Monte Carlo trials, conflict-graph censuses, exhaustive oracles, and
//! threshold sweeps all reduce a function over a dense index range. The
//! helpers here split the range into fixed-size chunks, fold each chunk
//! sequentially, and merge the chunk results in index order. Because the
//! chunk boundaries depend only on the range (never on the worker count),
//! parallel and sequential runs produce bit-identical results — including
//! for floating-point accumulators, where addition order matters.
//!
//! With the `parallel` feature (default) chunks run on rayon; without it
//! the same code runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default chunk size; small enough to load-balance, large enough to
/// amortize per-chunk overhead.
pub const DEFAULT_CHUNK: u64 = 1 << 12;

fn chunk_bounds(total: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    let mut bounds = Vec::with_capacity(total.div_ceil(chunk) as usize);
    let mut start = 0;
    while start < total {
        let end = (start + chunk).min(total);
        bounds.push((start, end));
        start = end;
    }
    bounds
}

/// Folds `step` over `0..total` chunk by chunk and merges the per-chunk
/// accumulators in index order. Deterministic for any worker count.
pub fn fold_chunked<T, New, Step, Merge>(
    total: u64,
    chunk: u64,
    new: New,
    step: Step,
    merge: Merge,
) -> T
where
    T: Send,
    New: Fn() -> T + Sync,
    Step: Fn(&mut T, u64) + Sync,
    Merge: Fn(&mut T, T),
{
    let bounds = chunk_bounds(total, chunk);
    let fold_one = |&(start, end): &(u64, u64)| {
        let mut acc = new();
        for i in start..end {
            step(&mut acc, i);
        }
        acc
    };

    #[cfg(feature = "parallel")]
    let partials: Vec<T> = bounds.par_iter().map(fold_one).collect();
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<T> = bounds.iter().map(fold_one).collect();

    let mut out = new();
    for part in partials {
        merge(&mut out, part);
    }
    out
}

/// Sequential reference lane with identical chunking and merge order.
/// Exists regardless of features so benchmarks can compare both lanes.
pub fn fold_chunked_seq<T, New, Step, Merge>(
    total: u64,
    chunk: u64,
    new: New,
    step: Step,
    merge: Merge,
) -> T
where
    New: Fn() -> T,
    Step: Fn(&mut T, u64),
    Merge: Fn(&mut T, T),
{
    let mut out = new();
    for (start, end) in chunk_bounds(total, chunk) {
        let mut acc = new();
        for i in start..end {
            step(&mut acc, i);
        }
        merge(&mut out, acc);
    }
    out
}

/// Chunk-ordered floating-point sum of `f(i)` over `0..total`.
pub fn sum_chunked<F>(total: u64, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    fold_chunked(
        total,
        DEFAULT_CHUNK,
        || 0.0,
        |acc, i| *acc += f(i),
        |acc, part| *acc += part,
    )
}

/// Count of indices in `0..total` satisfying `pred`.
pub fn count_chunked<F>(total: u64, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    fold_chunked(
        total,
        DEFAULT_CHUNK,
        || 0u64,
        |acc, i| *acc += u64::from(pred(i)),
        |acc, part| *acc += part,
    )
}
