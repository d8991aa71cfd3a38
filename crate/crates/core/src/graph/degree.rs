use super::{CsrGraph, VertexId};

/// Per-vertex out-degrees and the descending-degree vertex ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSummary {
    pub out_degree: Vec<u32>,
    pub max_degree: u32,
    /// Vertices by descending out-degree; ties broken by ascending id.
    pub degree_ordering: Vec<VertexId>,
}

pub fn degree_summary(g: &CsrGraph) -> DegreeSummary {
    let out_degree: Vec<u32> = g
        .row_offsets()
        .windows(2)
        .map(|w| (w[1] - w[0]) as u32)
        .collect();
    let max_degree = out_degree.iter().copied().max().unwrap_or(0);
    let mut degree_ordering: Vec<VertexId> = (0..g.vertex_count() as VertexId).collect();
    degree_ordering.sort_by_key(|&v| (std::cmp::Reverse(out_degree[v as usize]), v));
    DegreeSummary {
        out_degree,
        max_degree,
        degree_ordering,
    }
}
