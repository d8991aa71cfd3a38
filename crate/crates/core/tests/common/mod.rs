//! Sequential reference implementations, written independently of the engine.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use hgraph::graph::CsrGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod probe;

pub const INF_LEVEL: u32 = u32::MAX;

pub fn bfs_levels(g: &CsrGraph, source: u32) -> Vec<u32> {
    let mut level = vec![INF_LEVEL; g.vertex_count()];
    let mut queue = VecDeque::from([source]);
    level[source as usize] = 0;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if level[v as usize] == INF_LEVEL {
                level[v as usize] = level[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    level
}

/// Dijkstra. Weights must be non-negative, which also makes the bit
/// pattern of an `f64` order like its value.
pub fn dijkstra(g: &CsrGraph, source: u32) -> Vec<f64> {
    let w = g.weights().expect("weighted graph");
    let offsets = g.row_offsets();
    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = 0.0;
    heap.push(Reverse((0f64.to_bits(), source)));
    while let Some(Reverse((bits, u))) = heap.pop() {
        let d = f64::from_bits(bits);
        if d > dist[u as usize] {
            continue;
        }
        for e in offsets[u as usize]..offsets[u as usize + 1] {
            let v = g.targets()[e] as usize;
            let nd = d + w[e] as f64;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd.to_bits(), v as u32)));
            }
        }
    }
    dist
}

/// Smallest vertex id in each vertex's weakly connected component.
pub fn components(g: &CsrGraph) -> Vec<u32> {
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            parent[x as usize] = parent[parent[x as usize] as usize];
            x = parent[x as usize];
        }
        x
    }
    let mut parent: Vec<u32> = (0..g.vertex_count() as u32).collect();
    for (u, v) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        // the smaller root wins, so every root is its component's minimum
        if a < b {
            parent[b as usize] = a;
        } else if b < a {
            parent[a as usize] = b;
        }
    }
    (0..g.vertex_count() as u32).map(|v| find(&mut parent, v)).collect()
}

/// Power iteration from 1/N; mass of vertices without out-edges is dropped.
pub fn pagerank(g: &CsrGraph, damping: f64, iterations: usize) -> Vec<f64> {
    let n = g.vertex_count();
    let mut rank = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        let mut next = vec![(1.0 - damping) / n as f64; n];
        for u in 0..n as u32 {
            let deg = g.out_degree(u);
            if deg == 0 {
                continue;
            }
            let share = damping * rank[u as usize] / deg as f64;
            for &v in g.neighbors(u) {
                next[v as usize] += share;
            }
        }
        rank = next;
    }
    rank
}

/// Brandes' dependency of every vertex on shortest paths from `source`;
/// the source itself scores 0.
pub fn brandes(g: &CsrGraph, source: u32) -> Vec<f64> {
    let n = g.vertex_count();
    let mut sigma = vec![0f64; n];
    let mut dist = vec![-1i64; n];
    let mut stack = Vec::with_capacity(n);
    let mut queue = VecDeque::from([source]);
    sigma[source as usize] = 1.0;
    dist[source as usize] = 0;
    while let Some(u) = queue.pop_front() {
        stack.push(u);
        for &v in g.neighbors(u) {
            if dist[v as usize] < 0 {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
            if dist[v as usize] == dist[u as usize] + 1 {
                sigma[v as usize] += sigma[u as usize];
            }
        }
    }
    let mut delta = vec![0f64; n];
    while let Some(w) = stack.pop() {
        for &v in g.neighbors(w) {
            if dist[v as usize] == dist[w as usize] + 1 {
                delta[w as usize] += sigma[w as usize] / sigma[v as usize] * (1.0 + delta[v as usize]);
            }
        }
    }
    delta[source as usize] = 0.0;
    delta
}

/// Largest relative difference, with differences below `floor` in absolute
/// terms counted as zero.
pub fn max_rel_diff(a: &[f64], b: &[f64], floor: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            if x == y {
                0.0
            } else {
                let d = (x - y).abs();
                if d <= floor {
                    0.0
                } else {
                    d / x.abs().max(y.abs())
                }
            }
        })
        .fold(0.0, f64::max)
}

/// Σ_s max_p (compute + comm), recomputed from raw ledger entries.
pub fn ledger_makespan(report: &hgraph::telemetry::RunReport) -> f64 {
    let mut per_step = vec![0f64; report.ledger.supersteps];
    for e in &report.ledger.entries {
        let t = e.compute_ms + e.comm_ms;
        if t > per_step[e.superstep] {
            per_step[e.superstep] = t;
        }
    }
    per_step.iter().sum()
}

/// A vertex with outgoing edges, picked deterministically from `seed`.
pub fn pick_source(g: &CsrGraph, seed: u64) -> u32 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v = rng.gen_range(0..g.vertex_count() as u32);
        if g.out_degree(v) > 0 {
            return v;
        }
    }
}
