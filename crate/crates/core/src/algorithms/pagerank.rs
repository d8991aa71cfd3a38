use crate::engine::{
    self, build_partitions, Algorithm, BuildOptions, ComputeContext, ComputeOutcome, Direction,
    EngineConfig, Partition, SlotArray,
};
use crate::error::{Error, Result};
use crate::graph::CsrGraph;
use crate::partition::PartitionPlan;

pub const DEFAULT_DAMPING: f64 = 0.85;

/// Pull-based PageRank with a fixed iteration count.
///
/// The engine must run it over the transposed graph, so that each vertex's
/// edge list holds its in-neighbours. Contributions are normalised by the
/// in-neighbour's out-degree in the original graph; vertices without
/// out-edges contribute nothing, so their mass leaves the system.
#[derive(Debug, Clone)]
pub struct PageRank {
    pub damping: f64,
    pub iterations: usize,
    vertex_count: usize,
    out_degree: Vec<u32>,
}

pub struct PageRankState {
    /// rank / out-degree per local vertex; what other partitions read.
    contribution: Vec<f64>,
    inv_degree: Vec<f64>,
    iteration: usize,
}

impl PageRank {
    /// `g` is the original (not transposed) graph; only its out-degrees are kept.
    pub fn new(g: &CsrGraph, damping: f64, iterations: usize) -> Result<Self> {
        if iterations == 0 {
            return Err(Error::validation("pagerank needs at least one iteration"));
        }
        if !(0.0..=1.0).contains(&damping) {
            return Err(Error::validation(format!("damping {damping} outside [0, 1]")));
        }
        Ok(PageRank {
            damping,
            iterations,
            vertex_count: g.vertex_count(),
            out_degree: (0..g.vertex_count() as u32)
                .map(|v| g.out_degree(v) as u32)
                .collect(),
        })
    }
}

impl Algorithm for PageRank {
    type Message = f64;
    type State = PageRankState;
    type Output = Vec<f64>;

    fn name(&self) -> &'static str {
        "pagerank"
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
        Some(self.iterations)
    }

    fn state_bytes_per_vertex(&self) -> usize {
        16
    }

    fn init(&self, part: &Partition, slots: &SlotArray<f64>) -> PageRankState {
        let start = 1.0 / self.vertex_count as f64;
        let inv_degree: Vec<f64> = part
            .global_ids()
            .iter()
            .map(|&g| match self.out_degree[g as usize] {
                0 => 0.0,
                d => 1.0 / d as f64,
            })
            .collect();
        slots.fill(start);
        PageRankState {
            contribution: inv_degree.iter().map(|w| start * w).collect(),
            inv_degree,
            iteration: 0,
        }
    }

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut PageRankState) -> ComputeOutcome {
        let part = ctx.partition;
        let delta = (1.0 - self.damping) / self.vertex_count as f64;
        let contribution = &state.contribution;
        ctx.for_each_vertex(|v| {
            let targets = part.targets();
            let mut sum = 0.0;
            for &t in &targets[part.local_edges(v)] {
                sum += contribution[t.payload() as usize];
            }
            for &t in &targets[part.remote_edges(v)] {
                sum += ctx.read(t);
            }
            ctx.slots.store(v as usize, delta + self.damping * sum);
        });
        for (l, c) in state.contribution.iter_mut().enumerate() {
            *c = ctx.slots.load(l) * state.inv_degree[l];
        }
        state.iteration += 1;
        ComputeOutcome::vote(state.iteration >= self.iterations, part.edge_count() as u64)
    }

    fn gather(&self, state: &PageRankState, _slots: &SlotArray<f64>, local: u32) -> f64 {
        state.contribution[local as usize]
    }

    fn new_output(&self, vertex_count: usize) -> Vec<f64> {
        vec![0.0; vertex_count]
    }

    fn collect(&self, part: &Partition, slots: &SlotArray<f64>, _state: &PageRankState, out: &mut Vec<f64>) {
        for (l, &g) in part.global_ids().iter().enumerate() {
            out[g as usize] = slots.load(l);
        }
    }
}

/// `iterations` rounds of PageRank over `g`, partitioned by `plan`.
pub fn pagerank(g: &CsrGraph, plan: &PartitionPlan, damping: f64, iterations: usize) -> Result<Vec<f64>> {
    let alg = PageRank::new(g, damping, iterations)?;
    let pg = build_partitions(&g.transpose(), plan, BuildOptions::default())?;
    engine::run(&pg, &alg, &EngineConfig::default())?.into_output()
}
