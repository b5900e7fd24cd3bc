//! Execution policy for the data-parallel sweeps.
//!
//! Every sweep in the crate maps independent work items to results and then
//! reduces sequentially, so the output is identical whichever policy runs it.
//! Without the `parallel` feature, [`Exec::Parallel`] runs sequentially.

/// Fixed chunk length for chunked reductions. Chunk boundaries never depend on
/// the thread count, which keeps floating-point sums reproducible.
pub const REDUCE_CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this policy actually fans out to worker threads in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Sum of `f` over `items`, reduced per fixed-size chunk then in order.
    pub fn sum_by<T, F>(self, items: &[T], f: F) -> f64
    where
        T: Sync,
        F: Fn(&T) -> f64 + Sync + Send,
    {
        let chunks: Vec<&[T]> = items.chunks(REDUCE_CHUNK).collect();
        self.map(&chunks, |c| c.iter().map(&f).sum::<f64>()).into_iter().sum()
    }
}
