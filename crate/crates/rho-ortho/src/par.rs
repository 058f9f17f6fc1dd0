//! Data-parallel helpers with a sequential fallback.
//!
//! Hot loops (theta sweeps, probe trials, sign-vector enumeration) funnel
//! through these two functions so the `parallel` feature can swap rayon in
//! and out without touching call sites. Every reduction done on top of the
//! returned vectors must be order-independent; the map itself preserves
//! index order in both modes.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    (0..n).map(f).collect()
}
