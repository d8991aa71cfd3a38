//! One-call pipeline from a graph and a plan to a report.

use std::borrow::Cow;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algorithms::{
    run_bc, BcResult, Bfs, ConnectedComponents, Distance, PageRank, Sssp, DEFAULT_DAMPING,
};
use crate::engine::{
    self, build_partitions, footprint, Algorithm, BuildOptions, EngineConfig, Ledger,
    PartitionedGraph, Payload,
};
use crate::error::{Error, Result};
use crate::graph::{CsrGraph, VertexId};
use crate::partition::{make_plan, ElementDescriptor, PartitionPlan, Strategy};
use crate::telemetry::{teps, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmKind {
    Bfs,
    Pagerank,
    Bc,
    Sssp,
    Cc,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 5] = [
        AlgorithmKind::Bfs,
        AlgorithmKind::Pagerank,
        AlgorithmKind::Bc,
        AlgorithmKind::Sssp,
        AlgorithmKind::Cc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmKind::Bfs => "bfs",
            AlgorithmKind::Pagerank => "pagerank",
            AlgorithmKind::Bc => "bc",
            AlgorithmKind::Sssp => "sssp",
            AlgorithmKind::Cc => "cc",
        }
    }

    /// Whether the kernel starts from a source vertex.
    pub fn needs_source(self) -> bool {
        matches!(self, AlgorithmKind::Bfs | AlgorithmKind::Bc | AlgorithmKind::Sssp)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::validation(format!(
                    "unknown algorithm {s:?} (expected bfs, pagerank, bc, sssp or cc)"
                ))
            })
    }
}

/// Result of any kernel, indexed by global vertex id.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmOutput {
    Levels(Vec<u32>),
    Ranks { ranks: Vec<f64>, iterations: usize },
    Betweenness(BcResult),
    Distances(Vec<f64>),
    Labels(Vec<u32>),
}

impl AlgorithmOutput {
    /// Writes `vertex value` lines.
    pub fn write_text(&self, mut w: impl Write) -> io::Result<()> {
        match self {
            AlgorithmOutput::Levels(v) | AlgorithmOutput::Labels(v) => {
                for (i, x) in v.iter().enumerate() {
                    writeln!(w, "{i} {x}")?;
                }
            }
            AlgorithmOutput::Ranks { ranks: v, .. }
            | AlgorithmOutput::Distances(v)
            | AlgorithmOutput::Betweenness(BcResult { betweenness: v, .. }) => {
                for (i, x) in v.iter().enumerate() {
                    writeln!(w, "{i} {x}")?;
                }
            }
        }
        Ok(())
    }
}

/// Knobs of a single run that are not part of the plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub source: VertexId,
    pub iterations: usize,
    pub damping: f64,
    /// Visited bitmap for BFS on the host element.
    pub bitmap: bool,
    pub reduce_messages: bool,
    pub engine: EngineConfig,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec {
            source: 0,
            iterations: 5,
            damping: DEFAULT_DAMPING,
            bitmap: true,
            reduce_messages: true,
            engine: EngineConfig::default(),
        }
    }
}

/// Output (absent if the run aborted) and report of one run.
#[derive(Debug, Clone)]
pub struct Execution {
    pub output: Option<AlgorithmOutput>,
    pub report: RunReport,
}

/// A graph prepared for one algorithm.
///
/// PageRank pulls along in-edges, so it processes the transposed graph;
/// plans for it should be made with [`Workload::plan`] so that α and β
/// describe the edges that are actually processed.
pub struct Workload<'g> {
    kind: AlgorithmKind,
    original: &'g CsrGraph,
    processing: Cow<'g, CsrGraph>,
}

struct Drive<O> {
    output: Option<O>,
    ledger: Ledger,
    aborted: Option<String>,
    message_bytes: usize,
    state_bytes: usize,
}

fn drive<A: Algorithm>(pg: &PartitionedGraph, alg: &A, cfg: &EngineConfig) -> Result<Drive<A::Output>> {
    let r = engine::run(pg, alg, cfg)?;
    Ok(Drive {
        output: r.output,
        ledger: r.ledger,
        aborted: r.aborted,
        message_bytes: A::Message::WIRE_BYTES,
        state_bytes: alg.state_bytes_per_vertex(),
    })
}

impl<'g> Workload<'g> {
    pub fn new(kind: AlgorithmKind, g: &'g CsrGraph) -> Self {
        let processing = match kind {
            AlgorithmKind::Pagerank => Cow::Owned(g.transpose()),
            _ => Cow::Borrowed(g),
        };
        Workload {
            kind,
            original: g,
            processing,
        }
    }

    pub fn kind(&self) -> AlgorithmKind {
        self.kind
    }

    /// The graph the engine runs over.
    pub fn graph(&self) -> &CsrGraph {
        &self.processing
    }

    pub fn plan(
        &self,
        strategy: Strategy,
        alpha: f64,
        elements: Vec<ElementDescriptor>,
        seed: u64,
    ) -> Result<PartitionPlan> {
        make_plan(&self.processing, strategy, alpha, elements, seed)
    }

    pub fn single_plan(&self, host: ElementDescriptor) -> PartitionPlan {
        PartitionPlan::single(&self.processing, host)
    }

    pub fn run(&self, plan: &PartitionPlan, spec: &RunSpec) -> Result<Execution> {
        let g = self.graph();
        let pg = build_partitions(
            g,
            plan,
            BuildOptions {
                reduce_messages: spec.reduce_messages,
            },
        )?;
        let cfg = &spec.engine;
        let d = match self.kind {
            AlgorithmKind::Bfs => {
                let alg = Bfs::new(&pg, spec.source)?.with_bitmap(spec.bitmap);
                map(drive(&pg, &alg, cfg)?, AlgorithmOutput::Levels)
            }
            AlgorithmKind::Pagerank => {
                let alg = PageRank::new(self.original, spec.damping, spec.iterations)?;
                let iterations = spec.iterations;
                map(drive(&pg, &alg, cfg)?, |ranks| AlgorithmOutput::Ranks { ranks, iterations })
            }
            AlgorithmKind::Bc => {
                let (result, ledger) = run_bc(&pg, spec.source, cfg)?;
                Drive {
                    output: Some(AlgorithmOutput::Betweenness(result)),
                    ledger,
                    aborted: None,
                    message_bytes: 8,
                    state_bytes: 16,
                }
            }
            AlgorithmKind::Sssp if g.has_integral_weights() => {
                let alg = Sssp::<u64>::new(&pg, spec.source)?;
                map(drive(&pg, &alg, cfg)?, |d| {
                    AlgorithmOutput::Distances(d.into_iter().map(Distance::to_f64).collect())
                })
            }
            AlgorithmKind::Sssp => {
                let alg = Sssp::<f64>::new(&pg, spec.source)?;
                map(drive(&pg, &alg, cfg)?, AlgorithmOutput::Distances)
            }
            AlgorithmKind::Cc => {
                let alg = ConnectedComponents::new(&pg)?;
                map(drive(&pg, &alg, cfg)?, AlgorithmOutput::Labels)
            }
        };

        let total_ms = d.ledger.makespan_ms();
        let teps = d
            .output
            .as_ref()
            .and_then(|o| teps(self.original, o, total_ms / 1e3).ok())
            .unwrap_or(0.0);
        let mut plan_summary = plan.summary(false);
        plan_summary.assignment = None;
        plan_summary.local_id = None;
        let report = RunReport {
            algorithm: self.kind.as_str().to_string(),
            graph: self.original.descriptor(),
            plan: plan_summary,
            reduced: spec.reduce_messages,
            direction: match self.kind {
                AlgorithmKind::Pagerank => engine::Direction::Pull,
                _ => engine::Direction::Push,
            },
            message_bytes: d.message_bytes,
            supersteps: d.ledger.supersteps,
            total_ms,
            wall_ms: d.ledger.wall_ms,
            teps,
            edges_traversed: d.ledger.edges_traversed(),
            bytes_transferred: d.ledger.bytes_transferred(),
            footprints: (0..pg.partition_count())
                .map(|p| footprint(&pg, p, d.message_bytes, d.state_bytes))
                .collect(),
            ledger: d.ledger,
            aborted: d.aborted,
            config: None,
        };
        Ok(Execution {
            output: d.output,
            report,
        })
    }
}

fn map<O>(d: Drive<O>, f: impl FnOnce(O) -> AlgorithmOutput) -> Drive<AlgorithmOutput> {
    Drive {
        output: d.output.map(f),
        ledger: d.ledger,
        aborted: d.aborted,
        message_bytes: d.message_bytes,
        state_bytes: d.state_bytes,
    }
}
