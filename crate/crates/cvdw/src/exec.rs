//! Execution helpers: data-parallel map with a sequential fallback.
//!
//! With the default `parallel` feature, [`par_map`] fans work out over the
//! rayon thread pool; without it the same call runs sequentially. Trial
//! suites, width-table rows and multi-start searches all derive per-item
//! seeds, so the output is identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `items` in index order, sequentially.
pub fn seq_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R + Sync + Send,
    T: Send,
    R: Send,
{
    items.into_iter().map(f).collect()
}

/// Map `f` over `items`, in parallel when the `parallel` feature is
/// enabled. Results keep the input order.
#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R + Sync + Send,
    T: Send,
    R: Send,
{
    items.into_par_iter().map(f).collect()
}

/// Sequential fallback used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R + Sync + Send,
    T: Send,
    R: Send,
{
    seq_map(items, f)
}
