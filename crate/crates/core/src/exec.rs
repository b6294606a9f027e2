//! Sequential / data-parallel dispatch for index-parallel workloads.
//!
//! Every parallel path assembles its output in index order, so results are
//! bit-identical between the two modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How an index-parallel workload is executed.
///
/// Without the `parallel` feature `Parallel` runs sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
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

impl Execution {
    /// `f(0), f(1), …, f(len - 1)` collected in order.
    pub fn map_indices<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
            _ => (0..len).map(f).collect(),
        }
    }
}
