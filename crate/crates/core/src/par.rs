//! Thin dispatch layer between the rayon-backed data-parallel loops and the
//! sequential fallback. Both paths produce identical, index-ordered output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Run `f` over `0..n` and collect the non-`None` results, ordered by index.
pub(crate) fn scan<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        let mut hits: Vec<(usize, T)> = (0..n)
            .into_par_iter()
            .filter_map(|i| f(i).map(|t| (i, t)))
            .collect();
        hits.sort_by_key(|(i, _)| *i);
        hits.into_iter().map(|(_, t)| t).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).filter_map(f).collect()
    }
}
