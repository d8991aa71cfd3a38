use std::sync::atomic::{AtomicBool, Ordering};

use super::{flags, locate_source};
use crate::engine::{
    self, build_partitions, Algorithm, BuildOptions, ComputeContext, ComputeOutcome, EngineConfig,
    Partition, PartitionedGraph, Payload, SlotArray,
};
use crate::error::{Error, Result};
use crate::graph::{CsrGraph, VertexId};
use crate::partition::PartitionPlan;

/// Tentative distance type: exact integers for integral weights, floats otherwise.
pub trait Distance: Payload + PartialOrd {
    const INFINITY: Self;
    const ZERO: Self;
    fn add_weight(self, w: f32) -> Self;
    fn to_f64(self) -> f64;
}

impl Distance for u64 {
    const INFINITY: u64 = u64::MAX;
    const ZERO: u64 = 0;
    #[inline]
    fn add_weight(self, w: f32) -> u64 {
        self.saturating_add(w as u64)
    }
    fn to_f64(self) -> f64 {
        if self == u64::MAX {
            f64::INFINITY
        } else {
            self as f64
        }
    }
}

impl Distance for f64 {
    const INFINITY: f64 = f64::INFINITY;
    const ZERO: f64 = 0.0;
    #[inline]
    fn add_weight(self, w: f32) -> f64 {
        self + w as f64
    }
    fn to_f64(self) -> f64 {
        self
    }
}

/// Bellman-Ford over supersteps. A vertex improved during a superstep is
/// relaxed again in the same superstep if the loop has not reached it yet.
#[derive(Debug, Clone)]
pub struct Sssp<D> {
    source: (usize, u32),
    _dist: std::marker::PhantomData<D>,
}

pub struct SsspState {
    active: Vec<AtomicBool>,
}

impl<D: Distance> Sssp<D> {
    pub fn new(pg: &PartitionedGraph, source: VertexId) -> Result<Self> {
        if !pg.weighted {
            return Err(Error::config(
                "sssp needs edge weights; load a weighted graph or synthesize weights",
            ));
        }
        Ok(Sssp {
            source: locate_source(pg, source)?,
            _dist: std::marker::PhantomData,
        })
    }
}

#[inline]
fn min<D: Distance>(a: D, b: D) -> D {
    if b < a {
        b
    } else {
        a
    }
}

impl<D: Distance> Algorithm for Sssp<D> {
    type Message = D;
    type State = SsspState;
    type Output = Vec<D>;

    fn name(&self) -> &'static str {
        "sssp"
    }

    fn identity(&self) -> D {
        D::INFINITY
    }

    fn combine(&self, a: D, b: D) -> D {
        min(a, b)
    }

    fn state_bytes_per_vertex(&self) -> usize {
        D::WIRE_BYTES + 1
    }

    fn init(&self, part: &Partition, slots: &SlotArray<D>) -> SsspState {
        let active = flags(part.vertex_count(), false);
        if part.index == self.source.0 {
            slots.store(self.source.1 as usize, D::ZERO);
            active[self.source.1 as usize].store(true, Ordering::Relaxed);
        }
        SsspState { active }
    }

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut SsspState) -> ComputeOutcome {
        let part = ctx.partition;
        let weights = part.weights().expect("checked at construction");
        let active = &state.active;
        let finished = AtomicBool::new(true);
        let edges = ctx.sum_vertices(|v| {
            if !active[v as usize].swap(false, Ordering::AcqRel) {
                return 0;
            }
            let d = ctx.slots.load(v as usize);
            let targets = part.targets();
            let mut changed = false;
            for e in part.edges(v) {
                let t = targets[e];
                let candidate = d.add_weight(weights[e]);
                let prev = ctx.write(t, candidate);
                if candidate < prev {
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

    fn scatter(&self, state: &SsspState, slots: &SlotArray<D>, local: u32, value: D, _superstep: usize) {
        let prev = slots.fold(local as usize, value, min);
        if value < prev {
            state.active[local as usize].store(true, Ordering::Release);
        }
    }

    fn new_output(&self, vertex_count: usize) -> Vec<D> {
        vec![D::INFINITY; vertex_count]
    }

    fn collect(&self, part: &Partition, slots: &SlotArray<D>, _state: &SsspState, out: &mut Vec<D>) {
        for (l, &g) in part.global_ids().iter().enumerate() {
            out[g as usize] = slots.load(l);
        }
    }
}

/// Shortest-path distances from `source`; `f64::INFINITY` where unreachable.
///
/// Integral weights are summed as 64-bit integers, so the result is exact.
pub fn sssp(g: &CsrGraph, plan: &PartitionPlan, source: VertexId) -> Result<Vec<f64>> {
    let pg = build_partitions(g, plan, BuildOptions::default())?;
    let cfg = EngineConfig::default();
    if g.has_integral_weights() {
        let out = engine::run(&pg, &Sssp::<u64>::new(&pg, source)?, &cfg)?.into_output()?;
        Ok(out.into_iter().map(Distance::to_f64).collect())
    } else {
        engine::run(&pg, &Sssp::<f64>::new(&pg, source)?, &cfg)?.into_output()
    }
}
