//! Whole-graph CSR representation, generators, and file formats.

mod degree;
mod generate;
mod io;

pub use degree::{degree_summary, DegreeSummary};
pub use generate::{generate_rmat, generate_uniform, RmatParams};
pub use io::{
    load_edge_list, read_binary, read_graph, write_binary, write_edge_list, BINARY_MAGIC,
    BINARY_VERSION,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Mode};

/// Global vertex identifier. Graphs with 2^32 or more vertices are rejected.
pub type VertexId = u32;

/// Sentinel for "no vertex".
pub const NO_VERTEX: VertexId = VertexId::MAX;

/// Immutable compressed-sparse-row graph.
///
/// Edges of each vertex are sorted by target id; duplicate edges and
/// self-loops are kept.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrGraph {
    vertex_count: usize,
    row_offsets: Vec<usize>,
    targets: Vec<VertexId>,
    weights: Option<Vec<f32>>,
    directed: bool,
}

/// Short human-readable description embedded in reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDescriptor {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub directed: bool,
    pub weighted: bool,
    pub max_out_degree: usize,
}

impl CsrGraph {
    /// Builds a CSR from an edge list. `weights`, when present, is parallel to `edges`.
    ///
    /// Edges are grouped by source and sorted by target within each source;
    /// equal targets keep their input order.
    pub fn from_edges(
        vertex_count: usize,
        edges: Vec<(VertexId, VertexId)>,
        weights: Option<Vec<f32>>,
        directed: bool,
    ) -> Result<Self> {
        Self::from_edges_with(Mode::default(), vertex_count, edges, weights, directed)
    }

    pub fn from_edges_with(
        mode: Mode,
        vertex_count: usize,
        edges: Vec<(VertexId, VertexId)>,
        weights: Option<Vec<f32>>,
        directed: bool,
    ) -> Result<Self> {
        if vertex_count > VertexId::MAX as usize {
            return Err(Error::validation(format!(
                "vertex count {vertex_count} does not fit 32-bit vertex ids"
            )));
        }
        if let Some(w) = &weights {
            if w.len() != edges.len() {
                return Err(Error::validation("weights length differs from edge count"));
            }
            if let Some(bad) = w.iter().find(|x| !(**x >= 0.0)) {
                return Err(Error::validation(format!("negative or NaN weight {bad}")));
            }
        }
        if let Some(&(u, v)) = edges
            .iter()
            .find(|(u, v)| *u as usize >= vertex_count || *v as usize >= vertex_count)
        {
            return Err(Error::validation(format!(
                "edge ({u}, {v}) references a vertex outside [0, {vertex_count})"
            )));
        }

        let edge_count = edges.len();
        let mut row_offsets = vec![0usize; vertex_count + 1];
        for &(u, _) in &edges {
            row_offsets[u as usize + 1] += 1;
        }
        for i in 0..vertex_count {
            row_offsets[i + 1] += row_offsets[i];
        }

        let (targets, weights) = match weights {
            None => {
                let mut keys: Vec<u64> = edges
                    .into_iter()
                    .map(|(u, v)| ((u as u64) << 32) | v as u64)
                    .collect();
                par::sort_unstable(mode, &mut keys);
                (keys.into_iter().map(|k| k as u32).collect(), None)
            }
            Some(w) => {
                // (source, target, input position) gives a total order, so an
                // unstable sort is still deterministic and stable per target.
                let mut keys: Vec<(u32, u32, u32)> = edges
                    .iter()
                    .enumerate()
                    .map(|(i, &(u, v))| (u, v, i as u32))
                    .collect();
                drop(edges);
                par::sort_unstable(mode, &mut keys);
                let targets: Vec<VertexId> = keys.iter().map(|k| k.1).collect();
                let weights = keys.iter().map(|k| w[k.2 as usize]).collect();
                (targets, Some(weights))
            }
        };
        debug_assert_eq!(targets.len(), edge_count);

        Ok(CsrGraph {
            vertex_count,
            row_offsets,
            targets,
            weights,
            directed,
        })
    }

    /// Assembles a CSR from raw arrays, checking every invariant.
    pub fn from_parts(
        row_offsets: Vec<usize>,
        targets: Vec<VertexId>,
        weights: Option<Vec<f32>>,
        directed: bool,
    ) -> Result<Self> {
        if row_offsets.is_empty() {
            return Err(Error::validation("row_offsets must hold at least one entry"));
        }
        let g = CsrGraph {
            vertex_count: row_offsets.len() - 1,
            row_offsets,
            targets,
            weights,
            directed,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn targets(&self) -> &[VertexId] {
        &self.targets
    }

    pub fn weights(&self) -> Option<&[f32]> {
        self.weights.as_deref()
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.row_offsets[v + 1] - self.row_offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.row_offsets[v]..self.row_offsets[v + 1]]
    }

    /// Weights of `v`'s edges, parallel to [`CsrGraph::neighbors`].
    #[inline]
    pub fn edge_weights(&self, v: VertexId) -> Option<&[f32]> {
        let v = v as usize;
        self.weights
            .as_ref()
            .map(|w| &w[self.row_offsets[v]..self.row_offsets[v + 1]])
    }

    /// Iterates `(source, target)` over all edges in CSR order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.vertex_count as VertexId)
            .flat_map(move |u| self.neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn max_out_degree(&self) -> usize {
        self.row_offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    pub fn descriptor(&self) -> GraphDescriptor {
        GraphDescriptor {
            vertex_count: self.vertex_count,
            edge_count: self.edge_count(),
            directed: self.directed,
            weighted: self.is_weighted(),
            max_out_degree: self.max_out_degree(),
        }
    }

    /// True when every edge weight is a whole number.
    pub fn has_integral_weights(&self) -> bool {
        self.weights
            .as_ref()
            .is_some_and(|w| w.iter().all(|x| x.fract() == 0.0))
    }

    /// Checks the CSR invariants.
    pub fn validate(&self) -> Result<()> {
        let ro = &self.row_offsets;
        if ro.len() != self.vertex_count + 1 || ro[0] != 0 {
            return Err(Error::validation("row_offsets must start at 0 and span |V|+1"));
        }
        if ro.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::validation("row_offsets must be non-decreasing"));
        }
        if ro[self.vertex_count] != self.targets.len() {
            return Err(Error::validation("row_offsets[|V|] must equal |E|"));
        }
        if let Some(&t) = self
            .targets
            .iter()
            .find(|&&t| t as usize >= self.vertex_count)
        {
            return Err(Error::validation(format!("edge target {t} out of range")));
        }
        if let Some(w) = &self.weights {
            if w.len() != self.targets.len() {
                return Err(Error::validation("weights length differs from edge count"));
            }
            if w.iter().any(|x| !(*x >= 0.0)) {
                return Err(Error::validation("weights must be non-negative"));
            }
        }
        if !self.directed && !self.is_symmetric() {
            return Err(Error::validation("undirected graph has an unmatched edge"));
        }
        Ok(())
    }

    /// True when the edge multiset equals its reverse.
    pub fn is_symmetric(&self) -> bool {
        let mut forward: Vec<(u32, u32)> = self.edges().collect();
        let mut backward: Vec<(u32, u32)> = forward.iter().map(|&(u, v)| (v, u)).collect();
        forward.sort_unstable();
        backward.sort_unstable();
        forward == backward
    }

    /// Materializes every edge in both directions; the result is undirected.
    pub fn symmetrize(&self) -> CsrGraph {
        let mut edges = Vec::with_capacity(2 * self.edge_count());
        for (u, v) in self.edges() {
            edges.push((u, v));
            edges.push((v, u));
        }
        let weights = self
            .weights
            .as_ref()
            .map(|w| w.iter().flat_map(|&x| [x, x]).collect());
        CsrGraph::from_edges(self.vertex_count, edges, weights, false)
            .expect("symmetrizing a valid graph yields a valid graph")
    }

    /// Reverses every edge. Used to give pull-direction kernels incoming adjacency.
    pub fn transpose(&self) -> CsrGraph {
        let edges: Vec<_> = self.edges().map(|(u, v)| (v, u)).collect();
        // weights are stored in the same CSR order `edges()` walks
        CsrGraph::from_edges(self.vertex_count, edges, self.weights.clone(), self.directed)
            .expect("transposing a valid graph yields a valid graph")
    }

    /// Replaces weights with integers drawn uniformly from `[1, 64)`.
    pub fn with_random_weights(mut self, seed: u64) -> CsrGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = (0..self.edge_count())
            .map(|_| rng.gen_range(1u32..64) as f32)
            .collect();
        self.weights = Some(w);
        self
    }

    /// Drops edge weights.
    pub fn without_weights(mut self) -> CsrGraph {
        self.weights = None;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_sorted_segments() {
        let g = CsrGraph::from_edges(3, vec![(0, 2), (1, 0), (0, 1)], None, true).unwrap();
        assert_eq!(g.row_offsets(), &[0, 2, 3, 3]);
        assert_eq!(g.targets(), &[1, 2, 0]);
        g.validate().unwrap();
    }

    #[test]
    fn weights_follow_their_edges() {
        let g = CsrGraph::from_edges(
            3,
            vec![(0, 2), (0, 1), (0, 1)],
            Some(vec![7.0, 5.0, 9.0]),
            true,
        )
        .unwrap();
        assert_eq!(g.targets(), &[1, 1, 2]);
        // equal targets keep input order
        assert_eq!(g.weights().unwrap(), &[5.0, 9.0, 7.0]);
    }

    #[test]
    fn rejects_out_of_range_and_negative() {
        assert!(CsrGraph::from_edges(2, vec![(0, 2)], None, true).is_err());
        assert!(CsrGraph::from_edges(2, vec![(0, 1)], Some(vec![-1.0]), true).is_err());
        assert!(CsrGraph::from_parts(vec![0, 2, 1], vec![0, 1], None, true).is_err());
    }

    #[test]
    fn symmetrize_doubles_edges() {
        let g = CsrGraph::from_edges(4, vec![(0, 1), (1, 2), (3, 0)], None, true).unwrap();
        let u = g.symmetrize();
        assert_eq!(u.edge_count(), 2 * g.edge_count());
        assert!(!u.is_directed());
        u.validate().unwrap();
    }

    #[test]
    fn undirected_requires_symmetry() {
        assert!(CsrGraph::from_parts(vec![0, 1, 1], vec![1], None, false).is_err());
        assert!(CsrGraph::from_parts(vec![0, 1, 2], vec![1, 0], None, false).is_ok());
    }

    #[test]
    fn transpose_keeps_weights_with_edges() {
        let g = CsrGraph::from_edges(3, vec![(0, 1), (2, 1)], Some(vec![3.0, 4.0]), true).unwrap();
        let t = g.transpose();
        assert_eq!(t.neighbors(1), &[0, 2]);
        assert_eq!(t.edge_weights(1).unwrap(), &[3.0, 4.0]);
    }

    #[test]
    fn random_weights_are_integral_in_range() {
        let g = CsrGraph::from_edges(3, vec![(0, 1), (1, 2), (2, 0)], None, true)
            .unwrap()
            .with_random_weights(11);
        assert!(g.has_integral_weights());
        assert!(g.weights().unwrap().iter().all(|&w| (1.0..64.0).contains(&w)));
    }
}
