//! Order-fixed parallel reductions.
//!
//! Node ranges are split into fixed-size chunks, each chunk is summed
//! sequentially, and the chunk partials are folded left to right. The result
//! does not depend on the number of worker threads.

use rayon::prelude::*;
use std::ops::Add;

const CHUNK: usize = 4096;

pub(crate) fn deterministic_sum<T, F>(len: usize, zero: T, term: F) -> T
where
    T: Add<Output = T> + Copy + Send + Sync,
    F: Fn(usize) -> T + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partials: Vec<T> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(len);
            (c * CHUNK..end).fold(zero, |acc, i| acc + term(i))
        })
        .collect();
    partials.into_iter().fold(zero, |acc, x| acc + x)
}
