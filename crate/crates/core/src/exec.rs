//! Execution strategy for the embarrassingly parallel scans (pair scans in
//! the equivalence closure, exhaustive map enumeration, axiom sweeps).
//!
//! With the `parallel` feature the scans run on the rayon pool; without it,
//! or with [`Execution::Sequential`], they run on the calling thread. Both
//! paths yield results in index order, so observable output is identical.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is disabled.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// Applies `f` to every index in `0..n`, keeping the `Some` results in index order.
pub fn filter_map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().filter_map(f).collect()
        }
        _ => (0..n).filter_map(f).collect(),
    }
}

/// Like [`filter_map_indexed`] but over a `u64` range with flattened output,
/// for enumerations that can exceed `usize` on small targets.
pub fn flat_map_range<T, F>(n: u64, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().filter_map(f).collect()
        }
        _ => (0..n).filter_map(f).collect(),
    }
}
