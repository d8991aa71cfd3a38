//! Data-parallel loop shim.
//!
//! With the `parallel` feature the loops run on rayon; without it every
//! helper degrades to a plain sequential loop. [`Mode`] selects between the
//! two at runtime so benchmarks can compare both paths in one binary.

use serde::{Deserialize, Serialize};

/// Runtime execution mode for vertex and edge loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sequential,
    #[default]
    Parallel,
}

impl Mode {
    /// True when loops actually fan out to worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Mode::Parallel
    }
}

/// Calls `f(i)` for every `i` in `0..n`.
pub fn for_each_index<F>(mode: Mode, n: usize, f: F)
where
    F: Fn(usize) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        (0..n).into_par_iter().with_min_len(256).for_each(f);
        return;
    }
    let _ = mode;
    (0..n).for_each(f);
}

/// Calls `f(i)` for every index listed in `order`.
pub fn for_each_in<F>(mode: Mode, order: &[u32], f: F)
where
    F: Fn(usize) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        order
            .par_iter()
            .with_min_len(256)
            .for_each(|&i| f(i as usize));
        return;
    }
    let _ = mode;
    order.iter().for_each(|&i| f(i as usize));
}

/// Builds `[f(0), f(1), .., f(n-1)]`.
pub fn map_index<T, F>(mode: Mode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().with_min_len(256).map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Sums `f(i)` over `0..n`.
pub fn sum_index<F>(mode: Mode, n: usize, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().with_min_len(256).map(f).sum();
    }
    let _ = mode;
    (0..n).map(f).sum()
}

/// Sums `f(i)` over the indices listed in `order`.
pub fn sum_in<F>(mode: Mode, order: &[u32], f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return order
            .par_iter()
            .with_min_len(256)
            .map(|&i| f(i as usize))
            .sum();
    }
    let _ = mode;
    order.iter().map(|&i| f(i as usize)).sum()
}

/// Applies `f` to every element of `items` with its index.
pub fn for_each_mut<T, F>(mode: Mode, items: &mut [T], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        items
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, item)| f(i, item));
        return;
    }
    let _ = mode;
    items.iter_mut().enumerate().for_each(|(i, item)| f(i, item));
}

/// Sorts a slice; unstable order for equal keys is irrelevant to callers.
pub fn sort_unstable<T: Ord + Send>(mode: Mode, items: &mut [T]) {
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        items.par_sort_unstable();
        return;
    }
    let _ = mode;
    items.sort_unstable();
}

/// Number of hardware threads visible to the process.
pub fn available_threads() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}
