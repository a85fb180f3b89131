//! Data-parallel helpers.
//!
//! With the `parallel` feature the helpers run on the rayon pool; without it
//! they fall back to plain iterators. Results are always collected in input
//! order, and all arithmetic is exact, so both paths give identical output.

/// Below this many coefficient products a multiplication stays sequential.
pub const MUL_PAR_THRESHOLD: usize = 4096;

pub fn enabled() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(feature = "parallel")]
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Number of chunks to split a parallel workload into.
pub fn chunk_count() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads().max(1) * 2
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
