//! Run reports, traversal rates, and time breakdowns.

use serde::{Deserialize, Serialize};

use crate::algorithms::UNREACHED;
use crate::engine::{Direction, Footprint, Ledger};
use crate::error::{Error, Result};
use crate::graph::{CsrGraph, GraphDescriptor};
use crate::partition::PlanSummary;
use crate::runner::AlgorithmOutput;

pub use crate::engine::PhaseEntry;

/// Everything measured about one run.
///
/// `total_ms` is the makespan summed over supersteps from the ledger; it is
/// what TEPS divides by. Graph loading, partitioning, and partition
/// construction are not part of it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub graph: GraphDescriptor,
    pub plan: PlanSummary,
    pub reduced: bool,
    pub direction: Direction,
    /// Bytes per communicated value.
    pub message_bytes: usize,
    pub supersteps: usize,
    pub total_ms: f64,
    pub wall_ms: f64,
    pub teps: f64,
    pub edges_traversed: u64,
    pub bytes_transferred: u64,
    pub footprints: Vec<Footprint>,
    pub ledger: Ledger,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aborted: Option<String>,
    /// Fully resolved settings that produced this run, when a driver supplies them.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config: Option<serde_json::Value>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// One row per (superstep, partition, phase).
    pub fn ledger_csv(&self) -> String {
        let mut out = String::from("superstep,partition,phase,ms,wall_ms,bytes_transferred,edges\n");
        for e in &self.ledger.entries {
            out.push_str(&format!(
                "{},{},compute,{},{},0,{}\n",
                e.superstep, e.partition, e.compute_ms, e.compute_wall_ms, e.edges
            ));
            out.push_str(&format!(
                "{},{},comm,{},{},{},0\n",
                e.superstep, e.partition, e.comm_ms, e.comm_wall_ms, e.bytes_transferred
            ));
        }
        out
    }
}

fn visited_degree_sum(g: &CsrGraph, reached: impl Fn(usize) -> bool) -> u64 {
    (0..g.vertex_count())
        .filter(|&v| reached(v))
        .map(|v| g.out_degree(v as u32) as u64)
        .sum()
}

/// Traversed edges per second, by each algorithm's own definition.
///
/// BFS and SSSP count the out-degrees of reached vertices; BC counts them
/// twice for its two passes; PageRank divides |E| by the time per
/// iteration; CC divides |E| by the run time.
pub fn teps(g: &CsrGraph, output: &AlgorithmOutput, elapsed_s: f64) -> Result<f64> {
    if !(elapsed_s > 0.0) {
        return Err(Error::validation("elapsed time must be positive"));
    }
    let edges = match output {
        AlgorithmOutput::Levels(levels) => visited_degree_sum(g, |v| levels[v] != UNREACHED),
        AlgorithmOutput::Distances(dist) => visited_degree_sum(g, |v| dist[v].is_finite()),
        AlgorithmOutput::Betweenness(bc) => 2 * visited_degree_sum(g, |v| bc.dist[v] != UNREACHED),
        AlgorithmOutput::Ranks { iterations, .. } => g.edge_count() as u64 * *iterations as u64,
        AlgorithmOutput::Labels(_) => g.edge_count() as u64,
    };
    Ok(edges as f64 / elapsed_s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionBreakdown {
    pub partition: usize,
    pub compute_ms: f64,
    pub comm_ms: f64,
    pub compute_pct: f64,
    pub comm_pct: f64,
}

/// Where the time of a run went.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breakdown {
    pub partitions: Vec<PartitionBreakdown>,
    /// The partition that bounded each superstep.
    pub bottleneck_per_superstep: Vec<usize>,
    /// The partition with the largest total time.
    pub bottleneck: usize,
    /// Set when that partition is not the host, against the model's assumption.
    pub bottleneck_is_accelerator: bool,
    /// Compute and communication summed along the per-superstep bottleneck.
    pub path_compute_ms: f64,
    pub path_comm_ms: f64,
    /// Communication as a fraction of the bottleneck path.
    pub comm_share: f64,
}

pub fn breakdown(report: &RunReport) -> Breakdown {
    let ledger = &report.ledger;
    let pct = |part: f64, whole: f64| if whole > 0.0 { 100.0 * part / whole } else { 0.0 };
    let partitions: Vec<PartitionBreakdown> = ledger
        .partition_totals()
        .into_iter()
        .enumerate()
        .map(|(p, (compute_ms, comm_ms))| {
            let total = compute_ms + comm_ms;
            let (compute_pct, comm_pct) = if total > 0.0 {
                (pct(compute_ms, total), pct(comm_ms, total))
            } else {
                (100.0, 0.0)
            };
            PartitionBreakdown {
                partition: p,
                compute_ms,
                comm_ms,
                compute_pct,
                comm_pct,
            }
        })
        .collect();

    let bottleneck_per_superstep: Vec<usize> = (0..ledger.supersteps).map(|s| ledger.bottleneck(s)).collect();
    let (mut path_compute_ms, mut path_comm_ms) = (0.0, 0.0);
    for (s, &p) in bottleneck_per_superstep.iter().enumerate() {
        let e = &ledger.superstep(s)[p];
        path_compute_ms += e.compute_ms;
        path_comm_ms += e.comm_ms;
    }
    let mut bottleneck = 0;
    for (p, b) in partitions.iter().enumerate() {
        let best = &partitions[bottleneck];
        if b.compute_ms + b.comm_ms > best.compute_ms + best.comm_ms {
            bottleneck = p;
        }
    }
    let bottleneck_is_accelerator = report
        .plan
        .elements
        .get(bottleneck)
        .is_some_and(|e| !e.is_host());
    let path = path_compute_ms + path_comm_ms;
    Breakdown {
        partitions,
        bottleneck_per_superstep,
        bottleneck,
        bottleneck_is_accelerator,
        path_compute_ms,
        path_comm_ms,
        comm_share: if path > 0.0 { path_comm_ms / path } else { 0.0 },
    }
}
