//! Deterministic data parallelism.
//!
//! Hot loops are expressed as an ordered map over an index range followed by
//! a sequential reduction, so the parallel and sequential builds produce
//! bitwise-identical results. The `parallel` feature switches the map to
//! rayon; `map_indexed_seq` is always sequential and is what the benchmark
//! suite compares against.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `(0..n).map(f)` collected in index order, in parallel when enabled.
#[cfg(feature = "parallel")]
pub fn map_indexed<O: Send>(n: usize, f: impl Fn(usize) -> O + Sync + Send) -> Vec<O> {
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<O>(n: usize, f: impl Fn(usize) -> O) -> Vec<O> {
    (0..n).map(f).collect()
}

/// Always-sequential variant, kept for the parallel-vs-sequential benches
/// and the determinism tests.
pub fn map_indexed_seq<O>(n: usize, f: impl Fn(usize) -> O) -> Vec<O> {
    (0..n).map(f).collect()
}
