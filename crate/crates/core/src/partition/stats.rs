use super::PartitionPlan;
use crate::graph::CsrGraph;
use crate::par::{self, Mode};

/// Fraction of edges that cross partitions, before and after collapsing all
/// messages from one partition to the same remote vertex into one slot.
pub fn boundary_stats(g: &CsrGraph, plan: &PartitionPlan) -> (f64, f64) {
    let e = g.edge_count();
    if e == 0 {
        return (0.0, 0.0);
    }
    let k = plan.elements.len();
    let n = g.vertex_count();
    let assignment = &plan.assignment;
    let per_partition: Vec<(u64, u64)> = par::map_index(Mode::Parallel, k, |p| {
        let p = p as u32;
        let mut seen = vec![0u64; n.div_ceil(64)];
        let (mut cross, mut distinct) = (0u64, 0u64);
        for u in 0..n as u32 {
            if assignment[u as usize] != p {
                continue;
            }
            for &v in g.neighbors(u) {
                if assignment[v as usize] != p {
                    cross += 1;
                    let (w, b) = (v as usize / 64, v % 64);
                    if seen[w] & (1 << b) == 0 {
                        seen[w] |= 1 << b;
                        distinct += 1;
                    }
                }
            }
        }
        (cross, distinct)
    });
    let cross: u64 = per_partition.iter().map(|x| x.0).sum();
    let distinct: u64 = per_partition.iter().map(|x| x.1).sum();
    (cross as f64 / e as f64, distinct as f64 / e as f64)
}

/// Fraction of vertices owned by each element.
pub fn vertex_share(plan: &PartitionPlan) -> Vec<f64> {
    let n = plan.assignment.len();
    let mut counts = vec![0usize; plan.elements.len()];
    for &p in &plan.assignment {
        counts[p as usize] += 1;
    }
    if n == 0 {
        let mut share = vec![0.0; counts.len()];
        share[plan.host_index()] = 1.0;
        return share;
    }
    counts.iter().map(|&c| c as f64 / n as f64).collect()
}
