//! Internal helpers bridging the `rayon` and sequential builds.
//!
//! With the `rayon` feature (default) loops run on the current rayon pool;
//! without it the same closures run sequentially. Callers rely on the
//! results being identical either way.

#[cfg(feature = "rayon")]
use rayon::prelude::*;

/// Maps `f` over `0..n` into a Vec, in parallel when available.
pub(crate) fn map_indices<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "rayon")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "rayon"))]
    {
        (0..n).map(f).collect()
    }
}

/// Fills `out` by calling `f` on (row_index, row_slice) for each chunk of
/// length `row_len`, in parallel when available.
pub(crate) fn for_each_row<T, F>(out: &mut [T], row_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    #[cfg(feature = "rayon")]
    {
        out.par_chunks_mut(row_len)
            .enumerate()
            .for_each(|(y, row)| f(y, row));
    }
    #[cfg(not(feature = "rayon"))]
    {
        out.chunks_mut(row_len)
            .enumerate()
            .for_each(|(y, row)| f(y, row));
    }
}
