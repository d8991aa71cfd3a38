use std::sync::atomic::{AtomicBool, Ordering};

use super::{locate_source, Bitmap};
use crate::engine::{
    self, build_partitions, Algorithm, BuildOptions, ComputeContext, ComputeOutcome, EngineConfig,
    Partition, SlotArray,
};
use crate::error::Result;
use crate::graph::{CsrGraph, VertexId};
use crate::partition::PartitionPlan;

/// Level of a vertex the traversal never reached.
pub const UNREACHED: u32 = u32::MAX;

/// Level-synchronous BFS. Superstep `k` expands the vertices at level `k`.
#[derive(Debug, Clone)]
pub struct Bfs {
    source: (usize, u32),
    /// Keep a visited bitmap on the host element.
    pub bitmap: bool,
}

pub struct BfsState {
    level: u32,
    visited: Option<Bitmap>,
}

impl Bfs {
    pub fn new(pg: &engine::PartitionedGraph, source: VertexId) -> Result<Self> {
        Ok(Bfs {
            source: locate_source(pg, source)?,
            bitmap: true,
        })
    }

    pub fn with_bitmap(mut self, on: bool) -> Self {
        self.bitmap = on;
        self
    }
}

impl Algorithm for Bfs {
    type Message = u32;
    type State = BfsState;
    type Output = Vec<u32>;

    fn name(&self) -> &'static str {
        "bfs"
    }

    fn identity(&self) -> u32 {
        UNREACHED
    }

    fn combine(&self, a: u32, b: u32) -> u32 {
        a.min(b)
    }

    fn init(&self, part: &Partition, slots: &SlotArray<u32>) -> BfsState {
        let visited = (self.bitmap && part.element.is_host()).then(|| Bitmap::new(part.vertex_count()));
        if part.index == self.source.0 {
            slots.store(self.source.1 as usize, 0);
            if let Some(b) = &visited {
                b.set(self.source.1);
            }
        }
        BfsState { level: 0, visited }
    }

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut BfsState) -> ComputeOutcome {
        let part = ctx.partition;
        let level = state.level;
        let next = level + 1;
        let visited = state.visited.as_ref();
        let finished = AtomicBool::new(true);
        let edges = ctx.sum_vertices(|v| {
            if ctx.slots.load(v as usize) != level {
                return 0;
            }
            let targets = part.targets();
            let mut changed = false;
            for &t in &targets[part.local_edges(v)] {
                let n = t.payload();
                let fresh = match visited {
                    Some(bits) => bits.set(n),
                    None => ctx.slots.load(n as usize) == UNREACHED,
                };
                if fresh {
                    ctx.write(t, next);
                    changed = true;
                }
            }
            for &t in &targets[part.remote_edges(v)] {
                if ctx.read(t) == UNREACHED {
                    ctx.write(t, next);
                    changed = true;
                }
            }
            if changed {
                finished.store(false, Ordering::Relaxed);
            }
            part.out_degree(v) as u64
        });
        state.level = next;
        ComputeOutcome::vote(finished.into_inner(), edges)
    }

    fn scatter(&self, state: &BfsState, slots: &SlotArray<u32>, local: u32, value: u32, _superstep: usize) {
        if let Some(bits) = &state.visited {
            if !bits.set(local) {
                return;
            }
        }
        slots.fold(local as usize, value, u32::min);
    }

    fn new_output(&self, vertex_count: usize) -> Vec<u32> {
        vec![UNREACHED; vertex_count]
    }

    fn collect(&self, part: &Partition, slots: &SlotArray<u32>, _state: &BfsState, out: &mut Vec<u32>) {
        for (l, &g) in part.global_ids().iter().enumerate() {
            out[g as usize] = slots.load(l);
        }
    }
}

impl BfsState {
    pub fn is_visited(&self, local: u32) -> Option<bool> {
        self.visited.as_ref().map(|b| b.get(local))
    }
}

/// Hop distance from `source` to every vertex, [`UNREACHED`] where none exists.
pub fn bfs(g: &CsrGraph, plan: &PartitionPlan, source: VertexId) -> Result<Vec<u32>> {
    let pg = build_partitions(g, plan, BuildOptions::default())?;
    let alg = Bfs::new(&pg, source)?;
    engine::run(&pg, &alg, &EngineConfig::default())?.into_output()
}
