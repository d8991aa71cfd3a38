use std::sync::atomic::{AtomicBool, AtomicU32, Ordering};

use super::{locate_source, UNREACHED};
use crate::engine::{
    self, build_partitions, Algorithm, BuildOptions, ComputeContext, ComputeOutcome, Direction,
    EngineConfig, Ledger, Partition, PartitionedGraph, SlotArray,
};
use crate::error::Result;
use crate::graph::{CsrGraph, VertexId};
use crate::partition::PartitionPlan;

/// Forward cycle: BFS levels plus shortest-path counts, summed into the slots.
#[derive(Debug, Clone)]
pub struct BcForward {
    source: (usize, u32),
}

pub struct BcForwardState {
    dist: Vec<AtomicU32>,
    level: u32,
}

/// Levels and path counts of every vertex, indexed by global id.
#[derive(Debug, Clone, PartialEq)]
pub struct BcForwardOutput {
    pub dist: Vec<u32>,
    pub sigma: Vec<f64>,
}

impl BcForward {
    pub fn new(pg: &PartitionedGraph, source: VertexId) -> Result<Self> {
        Ok(BcForward {
            source: locate_source(pg, source)?,
        })
    }
}

impl Algorithm for BcForward {
    type Message = f64;
    type State = BcForwardState;
    type Output = BcForwardOutput;

    fn name(&self) -> &'static str {
        "bc-forward"
    }

    fn identity(&self) -> f64 {
        0.0
    }

    fn combine(&self, a: f64, b: f64) -> f64 {
        a + b
    }

    fn state_bytes_per_vertex(&self) -> usize {
        12
    }

    fn init(&self, part: &Partition, slots: &SlotArray<f64>) -> BcForwardState {
        let dist: Vec<AtomicU32> = (0..part.vertex_count())
            .map(|_| AtomicU32::new(UNREACHED))
            .collect();
        if part.index == self.source.0 {
            dist[self.source.1 as usize].store(0, Ordering::Relaxed);
            slots.store(self.source.1 as usize, 1.0);
        }
        BcForwardState { dist, level: 0 }
    }

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut BcForwardState) -> ComputeOutcome {
        let part = ctx.partition;
        let level = state.level;
        let next = level + 1;
        let dist = &state.dist;
        let finished = AtomicBool::new(true);
        let edges = ctx.sum_vertices(|v| {
            if dist[v as usize].load(Ordering::Relaxed) != level {
                return 0;
            }
            let paths = ctx.slots.load(v as usize);
            let targets = part.targets();
            let mut changed = false;
            for &t in &targets[part.local_edges(v)] {
                let n = &dist[t.payload() as usize];
                if n.compare_exchange(UNREACHED, next, Ordering::Relaxed, Ordering::Relaxed).is_ok() {
                    changed = true;
                }
                if n.load(Ordering::Relaxed) == next {
                    ctx.write(t, paths);
                }
            }
            // The owner decides on delivery whether the target sits one level down.
            for &t in &targets[part.remote_edges(v)] {
                ctx.write(t, paths);
                changed = true;
            }
            if changed {
                finished.store(false, Ordering::Relaxed);
            }
            part.out_degree(v) as u64
        });
        state.level = next;
        ComputeOutcome::vote(finished.into_inner(), edges)
    }

    fn scatter(&self, state: &BcForwardState, slots: &SlotArray<f64>, local: u32, value: f64, superstep: usize) {
        let next = superstep as u32 + 1;
        let d = &state.dist[local as usize];
        let _ = d.compare_exchange(UNREACHED, next, Ordering::Relaxed, Ordering::Relaxed);
        if d.load(Ordering::Relaxed) == next {
            slots.fold(local as usize, value, |a, b| a + b);
        }
    }

    fn new_output(&self, vertex_count: usize) -> BcForwardOutput {
        BcForwardOutput {
            dist: vec![UNREACHED; vertex_count],
            sigma: vec![0.0; vertex_count],
        }
    }

    fn collect(&self, part: &Partition, slots: &SlotArray<f64>, state: &BcForwardState, out: &mut BcForwardOutput) {
        for (l, &g) in part.global_ids().iter().enumerate() {
            out.dist[g as usize] = state.dist[l].load(Ordering::Relaxed);
            out.sigma[g as usize] = slots.load(l);
        }
    }
}

/// Backward cycle: dependencies from the deepest level up to level 1,
/// pulling `(1 + delta_w) / sigma_w` from successors one level down.
#[derive(Debug, Clone)]
pub struct BcBackward {
    source: VertexId,
    max_level: u32,
    dist: Vec<u32>,
    sigma: Vec<f64>,
}

pub struct BcBackwardState {
    dist: Vec<u32>,
    sigma: Vec<f64>,
    /// Level whose dependencies are complete and published.
    level: u32,
}

impl BcBackward {
    pub fn new(source: VertexId, forward: BcForwardOutput) -> Self {
        let max_level = forward
            .dist
            .iter()
            .copied()
            .filter(|&d| d != UNREACHED)
            .max()
            .unwrap_or(0);
        BcBackward {
            source,
            max_level,
            dist: forward.dist,
            sigma: forward.sigma,
        }
    }

    #[inline]
    fn published(dist: u32, sigma: f64, delta: f64, level: u32) -> f64 {
        if dist == level {
            (1.0 + delta) / sigma
        } else {
            0.0
        }
    }
}

impl Algorithm for BcBackward {
    type Message = f64;
    type State = BcBackwardState;
    type Output = Vec<f64>;

    fn name(&self) -> &'static str {
        "bc-backward"
    }

    fn direction(&self) -> Direction {
        Direction::Pull
    }

    fn identity(&self) -> f64 {
        0.0
    }

    fn combine(&self, a: f64, b: f64) -> f64 {
        a + b
    }

    fn max_supersteps(&self) -> Option<usize> {
        Some(self.max_level.max(1) as usize)
    }

    fn state_bytes_per_vertex(&self) -> usize {
        16
    }

    fn init(&self, part: &Partition, _slots: &SlotArray<f64>) -> BcBackwardState {
        let ids = part.global_ids();
        BcBackwardState {
            dist: ids.iter().map(|&g| self.dist[g as usize]).collect(),
            sigma: ids.iter().map(|&g| self.sigma[g as usize]).collect(),
            level: self.max_level,
        }
    }

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut BcBackwardState) -> ComputeOutcome {
        if state.level <= 1 {
            return ComputeOutcome::vote(true, 0);
        }
        let part = ctx.partition;
        let below = state.level;
        let level = below - 1;
        let (dist, sigma) = (&state.dist, &state.sigma);
        let edges = ctx.sum_vertices(|v| {
            let l = v as usize;
            if dist[l] != level {
                return 0;
            }
            let targets = part.targets();
            let mut sum = 0.0;
            for &t in &targets[part.local_edges(v)] {
                let n = t.payload() as usize;
                sum += Self::published(dist[n], sigma[n], ctx.slots.load(n), below);
            }
            for &t in &targets[part.remote_edges(v)] {
                sum += ctx.read(t);
            }
            ctx.slots.store(l, sigma[l] * sum);
            part.out_degree(v) as u64
        });
        state.level = level;
        ComputeOutcome::vote(level <= 1, edges)
    }

    fn gather(&self, state: &BcBackwardState, slots: &SlotArray<f64>, local: u32) -> f64 {
        let l = local as usize;
        Self::published(state.dist[l], state.sigma[l], slots.load(l), state.level)
    }

    fn new_output(&self, vertex_count: usize) -> Vec<f64> {
        vec![0.0; vertex_count]
    }

    fn collect(&self, part: &Partition, slots: &SlotArray<f64>, _state: &BcBackwardState, out: &mut Vec<f64>) {
        for (l, &g) in part.global_ids().iter().enumerate() {
            if g != self.source {
                out[g as usize] = slots.load(l);
            }
        }
    }
}

/// Dependencies of every vertex on `source`, plus the forward levels.
#[derive(Debug, Clone, PartialEq)]
pub struct BcResult {
    pub betweenness: Vec<f64>,
    pub dist: Vec<u32>,
}

/// Runs both cycles and returns the combined ledger.
pub fn run_bc(pg: &PartitionedGraph, source: VertexId, cfg: &EngineConfig) -> Result<(BcResult, Ledger)> {
    let forward = BcForward::new(pg, source)?;
    let fwd = engine::run(pg, &forward, cfg)?;
    let mut ledger = fwd.ledger.clone();
    let fwd_out = fwd.into_output()?;
    let dist = fwd_out.dist.clone();
    let backward = BcBackward::new(source, fwd_out);
    let bwd = engine::run(pg, &backward, cfg)?;
    ledger.extend(bwd.ledger.clone());
    let betweenness = bwd.into_output()?;
    Ok((BcResult { betweenness, dist }, ledger))
}

/// Single-source betweenness contributions (Brandes dependencies) over `g`.
pub fn betweenness_single_source(g: &CsrGraph, plan: &PartitionPlan, source: VertexId) -> Result<Vec<f64>> {
    let pg = build_partitions(g, plan, BuildOptions::default())?;
    Ok(run_bc(&pg, source, &EngineConfig::default())?.0.betweenness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::ElementDescriptor;

    #[test]
    fn undirected_path() {
        let g = CsrGraph::from_edges(3, vec![(0, 1), (1, 2)], None, true)
            .unwrap()
            .symmetrize();
        let plan = PartitionPlan::single(&g, ElementDescriptor::host(0, 1));
        assert_eq!(betweenness_single_source(&g, &plan, 0).unwrap(), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn isolated_source() {
        let g = CsrGraph::from_edges(3, vec![(1, 2)], None, true).unwrap();
        let plan = PartitionPlan::single(&g, ElementDescriptor::host(0, 1));
        assert_eq!(betweenness_single_source(&g, &plan, 0).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn diamond_splits_paths() {
        // 0 -> {1, 2} -> 3: two shortest paths, each middle vertex carries half.
        let g = CsrGraph::from_edges(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)], None, true).unwrap();
        let plan = PartitionPlan::single(&g, ElementDescriptor::host(0, 1));
        assert_eq!(betweenness_single_source(&g, &plan, 0).unwrap(), vec![0.0, 0.5, 0.5, 0.0]);
    }
}
