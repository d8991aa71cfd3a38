//! Fully resolved experiment settings and the small parsers behind the flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use hgraph::engine::{Direction, EngineConfig};
use hgraph::graph::{generate_rmat, generate_uniform, read_graph, CsrGraph, RmatParams};
use hgraph::par::Mode;
use hgraph::partition::{ElementDescriptor, ElementKind, Strategy};
use hgraph::runner::{AlgorithmKind, RunSpec};
use hgraph::Error;
use rand::seq::IteratorRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Where the input graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum GraphSource {
    File { path: PathBuf },
    Rmat { scale: u32, degree: usize, seed: Option<u64> },
    Uniform { scale: u32, degree: usize, seed: Option<u64> },
}

impl FromStr for GraphSource {
    type Err = Error;

    /// `rmat:SCALE:DEGREE[:SEED]`, `uniform:SCALE:DEGREE[:SEED]`, or a file path.
    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split(':').collect();
        let generator = matches!(parts[0], "rmat" | "uniform");
        if !generator || !(3..=4).contains(&parts.len()) {
            return Ok(GraphSource::File { path: s.into() });
        }
        let bad = |what: &str| Error::Validation(format!("bad {what} in graph spec {s:?}"));
        let scale = parts[1].parse().map_err(|_| bad("scale"))?;
        let degree = parts[2].parse().map_err(|_| bad("degree"))?;
        let seed = parts.get(3).map(|x| x.parse()).transpose().map_err(|_| bad("seed"))?;
        Ok(match parts[0] {
            "rmat" => GraphSource::Rmat { scale, degree, seed },
            _ => GraphSource::Uniform { scale, degree, seed },
        })
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gen = |f: &mut fmt::Formatter<'_>, name, scale, degree, seed: &Option<u64>| match seed {
            Some(s) => write!(f, "{name}:{scale}:{degree}:{s}"),
            None => write!(f, "{name}:{scale}:{degree}"),
        };
        match self {
            GraphSource::File { path } => write!(f, "{}", path.display()),
            GraphSource::Rmat { scale, degree, seed } => gen(f, "rmat", scale, degree, seed),
            GraphSource::Uniform { scale, degree, seed } => gen(f, "uniform", scale, degree, seed),
        }
    }
}

/// One `kind:workers[@throttle=RATE][@mem=BYTES]` item of an element list.
pub fn parse_element(id: u32, s: &str) -> Result<ElementDescriptor, Error> {
    let bad = |msg: String| Error::Validation(format!("element {s:?}: {msg}"));
    let mut parts = s.trim().split('@');
    let head = parts.next().unwrap_or_default();
    let (kind, workers) = head.split_once(':').unwrap_or((head, "1"));
    let workers: usize = workers
        .parse()
        .map_err(|_| bad(format!("worker count {workers:?} is not a number")))?;
    if workers == 0 {
        return Err(bad("worker count must be positive".into()));
    }
    let mut e = match kind.to_ascii_lowercase().as_str() {
        "host" | "cpu" => ElementDescriptor::host(id, workers),
        "accel" | "accelerator" | "gpu" => ElementDescriptor::accel(id, workers),
        other => return Err(bad(format!("unknown kind {other:?} (expected host or accel)"))),
    };
    for attr in parts {
        let (key, value) = attr
            .split_once('=')
            .ok_or_else(|| bad(format!("attribute {attr:?} needs a value")))?;
        let number: f64 = value
            .parse()
            .map_err(|_| bad(format!("{key} value {value:?} is not a number")))?;
        if !(number > 0.0) || !number.is_finite() {
            return Err(bad(format!("{key} must be positive")));
        }
        e = match key {
            "throttle" => e.with_throttle(number),
            "mem" => e.with_memory_budget(number as u64),
            other => return Err(bad(format!("unknown attribute {other:?}"))),
        };
    }
    Ok(e)
}

/// Comma-separated element list; ids follow list order.
pub fn parse_elements(s: &str) -> Result<Vec<ElementDescriptor>, Error> {
    let elements = s
        .split(',')
        .enumerate()
        .map(|(i, item)| parse_element(i as u32, item))
        .collect::<Result<Vec<_>, _>>()?;
    let hosts = elements.iter().filter(|e| e.kind == ElementKind::Host).count();
    if hosts != 1 {
        return Err(Error::Configuration(format!(
            "element list {s:?} has {hosts} host elements, exactly one is required"
        )));
    }
    Ok(elements)
}

pub fn format_elements(elements: &[ElementDescriptor]) -> String {
    elements
        .iter()
        .map(|e| {
            let mut s = format!("{}:{}", if e.is_host() { "host" } else { "accel" }, e.worker_count);
            if let Some(t) = e.throttle {
                s.push_str(&format!("@throttle={t:e}"));
            }
            if let Some(m) = e.memory_budget {
                s.push_str(&format!("@mem={m}"));
            }
            s
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses a comma-separated list of numbers.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::Validation(format!("grid value {x:?} is not a number")))
        })
        .collect()
}

/// Seeds for every random choice of a run, derived from one master seed
/// unless set explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub master: u64,
    pub graph: u64,
    pub plan: u64,
    pub source: u64,
    pub weights: u64,
}

impl Seeds {
    pub fn from_master(master: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master);
        Seeds {
            master,
            graph: rng.next_u64(),
            plan: rng.next_u64(),
            source: rng.next_u64(),
            weights: rng.next_u64(),
        }
    }
}

/// How the input graph is loaded and prepared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphConfig {
    pub source: GraphSource,
    /// Edge-list inputs: materialize each edge in both directions.
    pub undirected: bool,
    /// Edge-list inputs: read a third weight column.
    pub weighted: bool,
    pub symmetrize: bool,
    pub synth_weights: bool,
}

impl GraphConfig {
    pub fn load(&self, seeds: &Seeds) -> Result<CsrGraph, Error> {
        let g = match &self.source {
            GraphSource::File { path } => read_graph(path, !self.undirected, self.weighted)?,
            GraphSource::Rmat { scale, degree, seed } => {
                generate_rmat(*scale, *degree, RmatParams::default(), seed.unwrap_or(seeds.graph))?
            }
            GraphSource::Uniform { scale, degree, seed } => {
                generate_uniform(*scale, *degree, seed.unwrap_or(seeds.graph))?
            }
        };
        let g = if self.symmetrize { g.symmetrize() } else { g };
        Ok(if self.synth_weights { g.with_random_weights(seeds.weights) } else { g })
    }
}

/// Everything needed to repeat a run; embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub subcommand: String,
    pub graph: GraphConfig,
    pub algorithm: AlgorithmKind,
    pub strategy: Strategy,
    pub alpha: f64,
    pub elements: Vec<ElementDescriptor>,
    pub direction: Option<Direction>,
    pub seeds: Seeds,
    pub run: RunSpec,
    pub outputs: Outputs,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub report: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub ledger_csv: Option<PathBuf>,
}

/// The direction each kernel communicates in.
pub fn native_direction(kind: AlgorithmKind) -> Direction {
    match kind {
        AlgorithmKind::Pagerank => Direction::Pull,
        _ => Direction::Push,
    }
}

pub fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Push => "push",
        Direction::Pull => "pull",
    }
}

pub fn check_direction(kind: AlgorithmKind, wanted: Option<Direction>) -> Result<(), Error> {
    match wanted {
        Some(d) if d != native_direction(kind) => Err(Error::Configuration(format!(
            "{kind} only runs in {} direction, {} was requested",
            direction_name(native_direction(kind)),
            direction_name(d)
        ))),
        _ => Ok(()),
    }
}

/// Up-front checks that would otherwise fail deep inside a run.
pub fn check_graph(kind: AlgorithmKind, g: &CsrGraph) -> Result<(), Error> {
    match kind {
        AlgorithmKind::Sssp if !g.is_weighted() => Err(Error::Configuration(
            "sssp needs edge weights: load a weighted graph or pass --synth-weights".into(),
        )),
        AlgorithmKind::Cc if g.is_directed() && !g.is_symmetric() => Err(Error::Configuration(
            "cc needs an undirected graph: pass --symmetrize or --undirected".into(),
        )),
        _ => Ok(()),
    }
}

/// Seeded choice among vertices with at least one out-edge; 0 if there are none.
pub fn pick_source(g: &CsrGraph, seed: u64) -> u32 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.vertex_count() as u32)
        .filter(|&v| g.out_degree(v) > 0)
        .choose(&mut rng)
        .unwrap_or(0)
}

pub fn engine_config(mode: Mode, schedule_seed: Option<u64>, interconnect: Option<f64>, pace: bool) -> EngineConfig {
    EngineConfig {
        mode,
        schedule_seed,
        interconnect_rate: interconnect,
        pace_throttled: pace,
    }
}
