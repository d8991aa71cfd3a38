use std::sync::atomic::{AtomicBool, Ordering};

use super::flags;
use crate::engine::{
    self, build_partitions, Algorithm, BuildOptions, ComputeContext, ComputeOutcome, EngineConfig,
    Partition, PartitionedGraph, SlotArray,
};
use crate::error::{Error, Result};
use crate::graph::CsrGraph;
use crate::partition::PartitionPlan;

/// Min-label propagation on an undirected graph.
#[derive(Debug, Clone, Default)]
pub struct ConnectedComponents;

pub struct CcState {
    active: Vec<AtomicBool>,
}

impl ConnectedComponents {
    pub fn new(pg: &PartitionedGraph) -> Result<Self> {
        if pg.directed {
            return Err(Error::config(
                "connected components needs an undirected graph; symmetrize it first",
            ));
        }
        Ok(ConnectedComponents)
    }
}

impl Algorithm for ConnectedComponents {
    type Message = u32;
    type State = CcState;
    type Output = Vec<u32>;

    fn name(&self) -> &'static str {
        "cc"
    }

    fn identity(&self) -> u32 {
        u32::MAX
    }

    fn combine(&self, a: u32, b: u32) -> u32 {
        a.min(b)
    }

    fn init(&self, part: &Partition, slots: &SlotArray<u32>) -> CcState {
        for (l, &g) in part.global_ids().iter().enumerate() {
            slots.store(l, g);
        }
        CcState {
            active: flags(part.vertex_count(), true),
        }
    }

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut CcState) -> ComputeOutcome {
        let part = ctx.partition;
        let active = &state.active;
        let finished = AtomicBool::new(true);
        let edges = ctx.sum_vertices(|v| {
            if !active[v as usize].swap(false, Ordering::AcqRel) {
                return 0;
            }
            let label = ctx.slots.load(v as usize);
            let mut changed = false;
            for &t in &part.targets()[part.edges(v)] {
                if label < ctx.write(t, label) {
                    if part.is_local(t) {
                        active[t.payload() as usize].store(true, Ordering::Release);
                    }
                    changed = true;
                }
            }
            if changed {
                finished.store(false, Ordering::Relaxed);
            }
            part.out_degree(v) as u64
        });
        ComputeOutcome::vote(finished.into_inner(), edges)
    }

    fn scatter(&self, state: &CcState, slots: &SlotArray<u32>, local: u32, value: u32, _superstep: usize) {
        if value < slots.fold(local as usize, value, u32::min) {
            state.active[local as usize].store(true, Ordering::Release);
        }
    }

    fn new_output(&self, vertex_count: usize) -> Vec<u32> {
        vec![u32::MAX; vertex_count]
    }

    fn collect(&self, part: &Partition, slots: &SlotArray<u32>, _state: &CcState, out: &mut Vec<u32>) {
        for (l, &g) in part.global_ids().iter().enumerate() {
            out[g as usize] = slots.load(l);
        }
    }
}

/// Component label (smallest vertex id in the component) of every vertex.
pub fn connected_components(g: &CsrGraph, plan: &PartitionPlan) -> Result<Vec<u32>> {
    let pg = build_partitions(g, plan, BuildOptions::default())?;
    let alg = ConnectedComponents::new(&pg)?;
    engine::run(&pg, &alg, &EngineConfig::default())?.into_output()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::ElementDescriptor;

    #[test]
    fn two_disjoint_edges() {
        let g = CsrGraph::from_edges(4, vec![(0, 1), (2, 3)], None, true)
            .unwrap()
            .symmetrize();
        let plan = PartitionPlan::single(&g, ElementDescriptor::host(0, 1));
        assert_eq!(connected_components(&g, &plan).unwrap(), vec![0, 0, 2, 2]);
    }

    #[test]
    fn directed_input_rejected() {
        let g = CsrGraph::from_edges(2, vec![(0, 1)], None, true).unwrap();
        let plan = PartitionPlan::single(&g, ElementDescriptor::host(0, 1));
        assert!(matches!(connected_components(&g, &plan), Err(Error::Configuration(_))));
    }
}
