//! Synthetic graph generators: recursive-matrix (RMAT) and uniform random.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CsrGraph, VertexId};
use crate::error::{Error, Result};
use crate::par::{self, Mode};

// Each chunk draws from its own ChaCha stream so output does not depend on
// how chunks are scheduled.
const CHUNK_EDGES: usize = 1 << 16;

/// RMAT quadrant probabilities. The fourth quadrant gets `1 - a - b - c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RmatParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Default for RmatParams {
    fn default() -> Self {
        RmatParams {
            a: 0.57,
            b: 0.19,
            c: 0.19,
        }
    }
}

impl RmatParams {
    fn validate(&self) -> Result<()> {
        let RmatParams { a, b, c } = *self;
        if [a, b, c].iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::validation("RMAT probabilities must lie in [0, 1]"));
        }
        if a + b + c > 1.0 + 1e-12 {
            return Err(Error::validation(format!(
                "RMAT probabilities sum to {} > 1",
                a + b + c
            )));
        }
        Ok(())
    }
}

fn check_shape(scale: u32, avg_degree: usize) -> Result<(usize, usize)> {
    if scale == 0 || scale > 31 {
        return Err(Error::validation(format!("scale {scale} outside [1, 31]")));
    }
    if avg_degree == 0 {
        return Err(Error::validation("average degree must be at least 1"));
    }
    let vertices = 1usize << scale;
    let edges = vertices
        .checked_mul(avg_degree)
        .ok_or_else(|| Error::validation("edge count overflows"))?;
    Ok((vertices, edges))
}

fn generate_chunked<F>(edges: usize, seed: u64, draw: F) -> Vec<(VertexId, VertexId)>
where
    F: Fn(&mut ChaCha8Rng) -> (VertexId, VertexId) + Sync + Send,
{
    let chunks = edges.div_ceil(CHUNK_EDGES);
    let parts: Vec<Vec<(VertexId, VertexId)>> = par::map_index(Mode::Parallel, chunks, |chunk| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk as u64);
        let len = CHUNK_EDGES.min(edges - chunk * CHUNK_EDGES);
        (0..len).map(|_| draw(&mut rng)).collect()
    });
    parts.concat()
}

/// Directed RMAT graph with `2^scale` vertices and `avg_degree * 2^scale` edges.
///
/// Duplicates and self-loops are kept. Identical arguments give an identical graph.
pub fn generate_rmat(
    scale: u32,
    avg_degree: usize,
    params: RmatParams,
    seed: u64,
) -> Result<CsrGraph> {
    params.validate()?;
    let (vertices, edges) = check_shape(scale, avg_degree)?;
    let RmatParams { a, b, c } = params;
    let ab = a + b;
    let abc = a + b + c;
    let list = generate_chunked(edges, seed, |rng| {
        let (mut src, mut dst) = (0u32, 0u32);
        for _ in 0..scale {
            let r: f64 = rng.gen();
            let (sbit, dbit) = if r < a {
                (0, 0)
            } else if r < ab {
                (0, 1)
            } else if r < abc {
                (1, 0)
            } else {
                (1, 1)
            };
            src = (src << 1) | sbit;
            dst = (dst << 1) | dbit;
        }
        (src, dst)
    });
    CsrGraph::from_edges(vertices, list, None, true)
}

/// Directed Erdős–Rényi-style graph: every edge picks both endpoints uniformly.
pub fn generate_uniform(scale: u32, avg_degree: usize, seed: u64) -> Result<CsrGraph> {
    let (vertices, edges) = check_shape(scale, avg_degree)?;
    let n = vertices as u32;
    let list = generate_chunked(edges, seed, move |rng| {
        (rng.gen_range(0..n), rng.gen_range(0..n))
    });
    CsrGraph::from_edges(vertices, list, None, true)
}
