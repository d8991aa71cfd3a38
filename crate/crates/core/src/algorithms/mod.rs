//! The five kernels, written against the engine callbacks.
//!
//! Each kernel has a struct implementing [`Algorithm`](crate::engine::Algorithm)
//! for use with [`engine::run`](crate::engine::run), and a convenience
//! function that builds partitions from a plan and runs with default settings.

mod bc;
mod bfs;
mod cc;
mod pagerank;
mod sssp;

pub use bc::{betweenness_single_source, run_bc, BcForward, BcBackward, BcForwardOutput, BcResult};
pub use bfs::{bfs, Bfs, UNREACHED};
pub use cc::{connected_components, ConnectedComponents};
pub use pagerank::{pagerank, PageRank, DEFAULT_DAMPING};
pub use sssp::{sssp, Distance, Sssp};

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::engine::PartitionedGraph;
use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Owning partition and local id of `source`, or a validation error.
pub(crate) fn locate_source(pg: &PartitionedGraph, source: VertexId) -> Result<(usize, u32)> {
    if source as usize >= pg.vertex_count {
        return Err(Error::validation(format!(
            "source {source} outside [0, {})",
            pg.vertex_count
        )));
    }
    Ok(pg.locate(source))
}

pub(crate) fn flags(n: usize, value: bool) -> Vec<AtomicBool> {
    (0..n).map(|_| AtomicBool::new(value)).collect()
}

/// Packed bitmap with atomic test-and-set.
pub(crate) struct Bitmap(Vec<AtomicU64>);

impl Bitmap {
    pub(crate) fn new(n: usize) -> Self {
        Bitmap((0..n.div_ceil(64)).map(|_| AtomicU64::new(0)).collect())
    }

    /// Sets bit `i`; true if this call changed it.
    #[inline]
    pub(crate) fn set(&self, i: u32) -> bool {
        let bit = 1u64 << (i % 64);
        self.0[i as usize / 64].fetch_or(bit, Ordering::Relaxed) & bit == 0
    }

    #[inline]
    pub(crate) fn get(&self, i: u32) -> bool {
        self.0[i as usize / 64].load(Ordering::Relaxed) & (1u64 << (i % 64)) != 0
    }
}
