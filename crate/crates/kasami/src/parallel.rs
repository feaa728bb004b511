//! Deterministic chunked map-reduce.
//!
//! The index range is cut into chunks that depend only on its length, each
//! chunk is folded independently and partial results are merged in chunk
//! order, so the output does not depend on the worker count.

use std::ops::Range;

use rayon::prelude::*;

const TARGET_CHUNKS: u64 = 256;

pub fn chunks(len: u64) -> Vec<Range<u64>> {
    if len == 0 {
        return Vec::new();
    }
    let size = len.div_ceil(TARGET_CHUNKS);
    (0..len.div_ceil(size))
        .map(|i| i * size..((i + 1) * size).min(len))
        .collect()
}

pub fn chunked_fold<A, F, M>(len: u64, workers: usize, fold: F, mut merge: M) -> A
where
    A: Send + Default,
    F: Fn(Range<u64>) -> A + Sync + Send,
    M: FnMut(&mut A, A),
{
    let ranges = chunks(len);
    let parts: Vec<A> = if workers <= 1 {
        ranges.into_iter().map(&fold).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("thread pool");
        pool.install(|| ranges.into_par_iter().map(&fold).collect())
    };
    let mut acc = A::default();
    for part in parts {
        merge(&mut acc, part);
    }
    acc
}
