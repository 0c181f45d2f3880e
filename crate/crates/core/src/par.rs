//! Execution policy for the data-parallel loops.
//!
//! Every parallel loop in the crate goes through these helpers. Results are
//! collected in index order, so output never depends on thread scheduling.
//! Without the `parallel` feature both policies run sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Policy for a `--jobs`-style thread count: 1 means sequential; any other
/// value sizes the global pool (0 keeps the default size). Only the first
/// call can size the pool.
pub fn with_threads(jobs: usize) -> Execution {
    if jobs == 1 {
        return Execution::Sequential;
    }
    #[cfg(feature = "parallel")]
    if jobs > 1 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    Execution::Parallel
}

/// `(0..len).map(f).collect()` under the given policy.
pub fn map_range<R, F>(exec: Execution, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// `items.iter().map(f).collect()` under the given policy.
pub fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}
