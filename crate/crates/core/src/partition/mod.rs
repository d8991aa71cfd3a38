//! Degree-aware partitioning of a CSR graph across processing elements.
//!
//! `High` fills the host with the highest-degree vertices until it holds the
//! target edge share, `Low` does the same from the lowest-degree end, and
//! `Rand` draws each vertex independently and then repairs the host share.

mod stats;

pub use stats::{boundary_stats, vertex_share};

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{degree_summary, CsrGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Rand,
    High,
    Low,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Rand, Strategy::High, Strategy::Low];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Rand => "rand",
            Strategy::High => "high",
            Strategy::Low => "low",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rand" | "random" => Ok(Strategy::Rand),
            "high" => Ok(Strategy::High),
            "low" => Ok(Strategy::Low),
            other => Err(Error::validation(format!(
                "unknown strategy {other:?} (expected rand, high or low)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Host,
    #[serde(alias = "accelerator")]
    Accel,
}

/// One emulated processing element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElementDescriptor {
    pub element_id: u32,
    pub kind: ElementKind,
    pub worker_count: usize,
    /// Processing-rate cap in edges per second.
    pub throttle: Option<f64>,
    /// Bytes available for the partition's graph arrays.
    pub memory_budget: Option<u64>,
}

impl ElementDescriptor {
    pub fn host(element_id: u32, worker_count: usize) -> Self {
        ElementDescriptor {
            element_id,
            kind: ElementKind::Host,
            worker_count,
            throttle: None,
            memory_budget: None,
        }
    }

    pub fn accel(element_id: u32, worker_count: usize) -> Self {
        ElementDescriptor {
            kind: ElementKind::Accel,
            ..Self::host(element_id, worker_count)
        }
    }

    pub fn with_throttle(mut self, edges_per_second: f64) -> Self {
        self.throttle = Some(edges_per_second);
        self
    }

    pub fn with_memory_budget(mut self, bytes: u64) -> Self {
        self.memory_budget = Some(bytes);
        self
    }

    pub fn is_host(&self) -> bool {
        self.kind == ElementKind::Host
    }
}

/// A host plus `accelerators` accelerator elements, ids `0..=accelerators`.
pub fn host_and_accelerators(accelerators: usize) -> Vec<ElementDescriptor> {
    std::iter::once(ElementDescriptor::host(0, 1))
        .chain((1..=accelerators).map(|i| ElementDescriptor::accel(i as u32, 1)))
        .collect()
}

/// Result of partitioning: which element owns each vertex, and its local id there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub strategy: Strategy,
    pub alpha_target: f64,
    pub elements: Vec<ElementDescriptor>,
    /// Owning partition per vertex, as an index into `elements`.
    pub assignment: Vec<u32>,
    /// Dense per-partition vertex index.
    pub local_id: Vec<u32>,
    pub alpha_actual: f64,
    pub beta_raw: f64,
    pub beta_reduced: f64,
    pub vertex_share: Vec<f64>,
    pub vertex_counts: Vec<usize>,
    pub edge_counts: Vec<usize>,
}

/// JSON view of a plan; per-vertex arrays are optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanSummary {
    pub strategy: Strategy,
    pub alpha_target: f64,
    pub alpha_actual: f64,
    pub beta_raw: f64,
    pub beta_reduced: f64,
    pub vertex_share: Vec<f64>,
    pub vertex_counts: Vec<usize>,
    pub edge_counts: Vec<usize>,
    pub elements: Vec<ElementDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub assignment: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub local_id: Option<Vec<u32>>,
}

const ELIDE_ABOVE: usize = 1_000_000;

impl PartitionPlan {
    pub fn partition_count(&self) -> usize {
        self.elements.len()
    }

    pub fn host_index(&self) -> usize {
        self.elements
            .iter()
            .position(ElementDescriptor::is_host)
            .expect("plans always hold one host")
    }

    /// Summary for export. Per-vertex arrays are dropped above 10^6 vertices unless `full`.
    pub fn summary(&self, full: bool) -> PlanSummary {
        let keep = full || self.assignment.len() <= ELIDE_ABOVE;
        PlanSummary {
            strategy: self.strategy,
            alpha_target: self.alpha_target,
            alpha_actual: self.alpha_actual,
            beta_raw: self.beta_raw,
            beta_reduced: self.beta_reduced,
            vertex_share: self.vertex_share.clone(),
            vertex_counts: self.vertex_counts.clone(),
            edge_counts: self.edge_counts.clone(),
            elements: self.elements.clone(),
            assignment: keep.then(|| self.assignment.clone()),
            local_id: keep.then(|| self.local_id.clone()),
        }
    }

    /// A plan that keeps every vertex on a single host element.
    pub fn single(g: &CsrGraph, host: ElementDescriptor) -> PartitionPlan {
        make_plan(g, Strategy::High, 1.0, vec![host], 0)
            .expect("a lone host is always a feasible plan")
    }
}

fn check_elements(elements: &[ElementDescriptor]) -> Result<usize> {
    if elements.is_empty() {
        return Err(Error::config("at least one processing element is required"));
    }
    let hosts: Vec<usize> = elements
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_host())
        .map(|(i, _)| i)
        .collect();
    if hosts.len() != 1 {
        return Err(Error::config(format!(
            "exactly one host element is required, found {}",
            hosts.len()
        )));
    }
    for (i, e) in elements.iter().enumerate() {
        if e.worker_count == 0 {
            return Err(Error::config(format!(
                "element {} has zero workers",
                e.element_id
            )));
        }
        if let Some(t) = e.throttle {
            if !(t > 0.0) {
                return Err(Error::config(format!(
                    "element {} has a non-positive throttle",
                    e.element_id
                )));
            }
        }
        if elements[..i].iter().any(|o| o.element_id == e.element_id) {
            return Err(Error::config(format!(
                "duplicate element id {}",
                e.element_id
            )));
        }
    }
    Ok(hosts[0])
}

/// Partitions `g` across `elements` so that the host holds about `alpha_target` of the edges.
pub fn make_plan(
    g: &CsrGraph,
    strategy: Strategy,
    alpha_target: f64,
    elements: Vec<ElementDescriptor>,
    seed: u64,
) -> Result<PartitionPlan> {
    let host = check_elements(&elements)?;
    if !(0.0..=1.0).contains(&alpha_target) {
        return Err(Error::validation(format!(
            "alpha target {alpha_target} outside [0, 1]"
        )));
    }
    let n = g.vertex_count();
    let degrees = degree_summary(g);
    let deg = |v: VertexId| degrees.out_degree[v as usize] as u64;
    let total = g.edge_count() as u64;
    let target = alpha_target * total as f64;
    let accels: Vec<usize> = (0..elements.len()).filter(|&i| i != host).collect();

    let mut assignment = vec![host as u32; n];
    if !accels.is_empty() && alpha_target < 1.0 {
        match strategy {
            Strategy::High | Strategy::Low => {
                let order: Box<dyn Iterator<Item = VertexId>> = match strategy {
                    Strategy::High => Box::new(degrees.degree_ordering.iter().copied()),
                    _ => Box::new(degrees.degree_ordering.iter().rev().copied()),
                };
                greedy_fill(order, &deg, total, target, host, &accels, &mut assignment);
            }
            Strategy::Rand => {
                random_fill(n, alpha_target, host, &accels, seed, &mut assignment);
                repair_host_share(
                    &degrees.degree_ordering,
                    &deg,
                    target,
                    host,
                    &accels,
                    &mut assignment,
                );
            }
        }
    }

    let k = elements.len();
    let mut vertex_counts = vec![0usize; k];
    let mut edge_counts = vec![0usize; k];
    let mut local_id = vec![0u32; n];
    for v in 0..n {
        let p = assignment[v] as usize;
        local_id[v] = vertex_counts[p] as u32;
        vertex_counts[p] += 1;
        edge_counts[p] += degrees.out_degree[v] as usize;
    }

    let weight_bytes = if g.is_weighted() { 4 } else { 0 };
    for (i, e) in elements.iter().enumerate() {
        if let (false, Some(budget)) = (e.is_host(), e.memory_budget) {
            let need = 4 * (vertex_counts[i] as u64 + 1) + (4 + weight_bytes) * edge_counts[i] as u64;
            if need > budget {
                return Err(Error::Capacity {
                    element: e.element_id,
                    message: format!(
                        "partition needs {need} bytes but the budget is {budget}; raise alpha"
                    ),
                });
            }
        }
    }

    let alpha_actual = if total == 0 {
        1.0
    } else {
        edge_counts[host] as f64 / total as f64
    };
    let mut plan = PartitionPlan {
        strategy,
        alpha_target,
        elements,
        assignment,
        local_id,
        alpha_actual,
        beta_raw: 0.0,
        beta_reduced: 0.0,
        vertex_share: Vec::new(),
        vertex_counts,
        edge_counts,
    };
    let (raw, reduced) = boundary_stats(g, &plan);
    plan.beta_raw = raw;
    plan.beta_reduced = reduced;
    plan.vertex_share = vertex_share(&plan);
    Ok(plan)
}

/// Walks `order`, filling the host up to `target` edges, then each
/// accelerator in turn up to an equal share of what remains.
fn greedy_fill(
    order: impl Iterator<Item = VertexId>,
    deg: &impl Fn(VertexId) -> u64,
    total: u64,
    target: f64,
    host: usize,
    accels: &[usize],
    assignment: &mut [u32],
) {
    let mut order = order.peekable();
    let mut host_edges = 0u64;
    while (host_edges as f64) < target {
        let Some(v) = order.next() else { break };
        assignment[v as usize] = host as u32;
        host_edges += deg(v);
    }
    let remaining = total - host_edges;
    let k = accels.len() as u64;
    let mut filled = 0u64;
    for (j, &p) in accels.iter().enumerate() {
        let last = j + 1 == accels.len();
        let budget = remaining * (j as u64 + 1) / k;
        while last || filled < budget {
            let Some(v) = order.next() else { break };
            assignment[v as usize] = p as u32;
            filled += deg(v);
        }
    }
}

fn random_fill(
    n: usize,
    alpha: f64,
    host: usize,
    accels: &[usize],
    seed: u64,
    assignment: &mut [u32],
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let share = (1.0 - alpha) / accels.len() as f64;
    for slot in assignment.iter_mut().take(n) {
        let r: f64 = rng.gen();
        *slot = if r < alpha {
            host as u32
        } else {
            let j = (((r - alpha) / share) as usize).min(accels.len() - 1);
            accels[j] as u32
        };
    }
}

/// Moves the largest vertices that still fit the gap between the host's edge
/// count and `target`, leaving the host within one vertex degree of it.
fn repair_host_share(
    ordering: &[VertexId],
    deg: &impl Fn(VertexId) -> u64,
    target: f64,
    host: usize,
    accels: &[usize],
    assignment: &mut [u32],
) {
    let host_u = host as u32;
    let host_edges: u64 = ordering
        .iter()
        .filter(|&&v| assignment[v as usize] == host_u)
        .map(|&v| deg(v))
        .sum();
    let mut accel_edges: Vec<u64> = accels
        .iter()
        .map(|&p| {
            ordering
                .iter()
                .filter(|&&v| assignment[v as usize] == p as u32)
                .map(|&v| deg(v))
                .sum()
        })
        .collect();

    if (host_edges as f64) < target {
        let mut gap = target - host_edges as f64;
        for &v in ordering {
            let d = deg(v);
            if d == 0 || gap <= 0.0 {
                break;
            }
            let owner = assignment[v as usize];
            if owner != host_u && d as f64 <= gap {
                let j = accels.iter().position(|&p| p as u32 == owner).unwrap();
                accel_edges[j] -= d;
                assignment[v as usize] = host_u;
                gap -= d as f64;
            }
        }
    } else if (host_edges as f64) > target {
        let mut gap = host_edges as f64 - target;
        for &v in ordering {
            let d = deg(v);
            if d == 0 || gap <= 0.0 {
                break;
            }
            if assignment[v as usize] == host_u && d as f64 <= gap {
                let (j, _) = accel_edges
                    .iter()
                    .enumerate()
                    .min_by_key(|&(i, e)| (*e, i))
                    .unwrap();
                accel_edges[j] += d;
                assignment[v as usize] = accels[j] as u32;
                gap -= d as f64;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Out-degrees [5, 3, 2, 1, 1]; all targets point at vertex 4.
    fn degree_graph(degrees: &[usize]) -> CsrGraph {
        let n = degrees.len();
        let mut edges = Vec::new();
        for (v, &d) in degrees.iter().enumerate() {
            for i in 0..d {
                edges.push((v as u32, ((v + 1 + i) % n) as u32));
            }
        }
        CsrGraph::from_edges(n, edges, None, true).unwrap()
    }

    #[test]
    fn high_walks_from_the_top() {
        let g = degree_graph(&[5, 3, 2, 1, 1]);
        let plan = make_plan(&g, Strategy::High, 0.5, host_and_accelerators(1), 0).unwrap();
        assert_eq!(plan.assignment, vec![0, 0, 1, 1, 1]);
        assert!((plan.alpha_actual - 8.0 / 12.0).abs() < 1e-12);
        assert_eq!(plan.local_id, vec![0, 1, 0, 1, 2]);
    }

    #[test]
    fn low_walks_from_the_bottom() {
        let g = degree_graph(&[5, 3, 2, 1, 1]);
        let plan = make_plan(&g, Strategy::Low, 0.5, host_and_accelerators(1), 0).unwrap();
        // 1 + 1 + 2 + 3 = 7 >= 6
        assert_eq!(plan.assignment, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn alpha_one_keeps_everything_home() {
        let g = degree_graph(&[5, 3, 2, 1, 1, 0]);
        for s in Strategy::ALL {
            let plan = make_plan(&g, s, 1.0, host_and_accelerators(2), 3).unwrap();
            assert!(plan.assignment.iter().all(|&p| p == 0));
            assert_eq!(plan.beta_raw, 0.0);
            assert_eq!(plan.beta_reduced, 0.0);
            assert_eq!(plan.vertex_share[0], 1.0);
        }
    }

    #[test]
    fn high_and_low_complement_at_degree_boundary() {
        let g = degree_graph(&[4, 2, 1, 1]);
        let high = make_plan(&g, Strategy::High, 0.5, host_and_accelerators(1), 0).unwrap();
        let low = make_plan(&g, Strategy::Low, 0.5, host_and_accelerators(1), 0).unwrap();
        for v in 0..4 {
            assert_ne!(high.assignment[v], low.assignment[v]);
        }
    }

    #[test]
    fn element_validation() {
        let g = degree_graph(&[1, 1]);
        let two_hosts = vec![ElementDescriptor::host(0, 1), ElementDescriptor::host(1, 1)];
        assert!(matches!(
            make_plan(&g, Strategy::High, 0.5, two_hosts, 0),
            Err(Error::Configuration(_))
        ));
        let no_workers = vec![ElementDescriptor::host(0, 0)];
        assert!(make_plan(&g, Strategy::High, 0.5, no_workers, 0).is_err());
        assert!(make_plan(&g, Strategy::High, 1.5, host_and_accelerators(1), 0).is_err());
    }

    #[test]
    fn memory_budget_is_enforced() {
        let g = degree_graph(&[5, 3, 2, 1, 1]);
        let elements = vec![
            ElementDescriptor::host(0, 1),
            ElementDescriptor::accel(7, 1).with_memory_budget(16),
        ];
        match make_plan(&g, Strategy::High, 0.5, elements.clone(), 0) {
            Err(Error::Capacity { element, .. }) => assert_eq!(element, 7),
            other => panic!("expected capacity error, got {other:?}"),
        }
        assert!(make_plan(&g, Strategy::High, 1.0, elements, 0).is_ok());
    }

    #[test]
    fn three_way_high_splits_the_rest_evenly() {
        let g = degree_graph(&[6, 4, 3, 3, 2, 2, 1, 1]);
        let plan = make_plan(&g, Strategy::High, 0.3, host_and_accelerators(2), 0).unwrap();
        // host: 6 (>= 6.6? no) + 4 = 10; remaining 12 split 6/6
        assert_eq!(plan.edge_counts, vec![10, 6, 6]);
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
        }
        assert!("metis".parse::<Strategy>().is_err());
    }
}
