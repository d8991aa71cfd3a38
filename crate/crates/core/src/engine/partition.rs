use std::ops::Range;

use super::encoding::{EncodedTarget, MAX_PARTITIONS, PAYLOAD_MASK};
use crate::error::{Error, Result};
use crate::graph::{CsrGraph, VertexId};
use crate::par::{self, Mode};
use crate::partition::{ElementDescriptor, PartitionPlan};

/// Remote vertex list of one outbox or inbox, as local ids in the owning partition.
///
/// Outbox `p -> q` and inbox `q <- p` carry the same list; slot `i` of one
/// corresponds to slot `i` of the other.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BufferLayout {
    pub remote_vertex_ids: Vec<u32>,
}

impl BufferLayout {
    pub fn len(&self) -> usize {
        self.remote_vertex_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.remote_vertex_ids.is_empty()
    }
}

/// One processing element's share of the graph.
///
/// Edge entries of each vertex list local targets first, then remote ones;
/// remote entries hold outbox slot indices instead of vertex ids.
#[derive(Debug, Clone)]
pub struct Partition {
    pub index: usize,
    pub element: ElementDescriptor,
    row_offsets: Vec<usize>,
    remote_start: Vec<usize>,
    targets: Vec<EncodedTarget>,
    weights: Option<Vec<f32>>,
    global_ids: Vec<VertexId>,
    /// Indexed by destination partition; the entry for `index` itself is empty.
    pub outboxes: Vec<BufferLayout>,
    /// Indexed by source partition; the entry for `index` itself is empty.
    pub inboxes: Vec<BufferLayout>,
}

impl Partition {
    pub fn vertex_count(&self) -> usize {
        self.global_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn targets(&self) -> &[EncodedTarget] {
        &self.targets
    }

    pub fn weights(&self) -> Option<&[f32]> {
        self.weights.as_deref()
    }

    #[inline]
    pub fn edges(&self, v: u32) -> Range<usize> {
        self.row_offsets[v as usize]..self.row_offsets[v as usize + 1]
    }

    /// Edge entries of `v` that stay inside this partition.
    #[inline]
    pub fn local_edges(&self, v: u32) -> Range<usize> {
        self.row_offsets[v as usize]..self.remote_start[v as usize]
    }

    /// Edge entries of `v` that point at outbox slots.
    #[inline]
    pub fn remote_edges(&self, v: u32) -> Range<usize> {
        self.remote_start[v as usize]..self.row_offsets[v as usize + 1]
    }

    #[inline]
    pub fn out_degree(&self, v: u32) -> usize {
        self.row_offsets[v as usize + 1] - self.row_offsets[v as usize]
    }

    #[inline]
    pub fn is_local(&self, t: EncodedTarget) -> bool {
        t.tag() == self.index
    }

    #[inline]
    pub fn global_id(&self, local: u32) -> VertexId {
        self.global_ids[local as usize]
    }

    pub fn global_ids(&self) -> &[VertexId] {
        &self.global_ids
    }

    /// Σ outbox slots (|V_o|).
    pub fn outbox_slots(&self) -> usize {
        self.outboxes.iter().map(BufferLayout::len).sum()
    }

    /// Σ inbox slots (|V_i|).
    pub fn inbox_slots(&self) -> usize {
        self.inboxes.iter().map(BufferLayout::len).sum()
    }

    pub fn boundary_edge_count(&self) -> usize {
        (0..self.vertex_count() as u32)
            .map(|v| self.remote_edges(v).len())
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// One outbox slot per distinct remote vertex (on) or per boundary edge (off).
    pub reduce_messages: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            reduce_messages: true,
        }
    }
}

/// All partitions of one plan, plus the global-to-local map.
#[derive(Debug, Clone)]
pub struct PartitionedGraph {
    pub partitions: Vec<Partition>,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub weighted: bool,
    pub directed: bool,
    pub reduced: bool,
    assignment: Vec<u32>,
    local_id: Vec<u32>,
}

impl PartitionedGraph {
    pub fn partition_count(&self) -> usize {
        self.partitions.len()
    }

    /// Owning partition and local id of a global vertex.
    pub fn locate(&self, v: VertexId) -> (usize, u32) {
        (self.assignment[v as usize] as usize, self.local_id[v as usize])
    }

    pub fn total_outbox_slots(&self) -> usize {
        self.partitions.iter().map(Partition::outbox_slots).sum()
    }

    /// Size of vertex ids in the space formulas (4 bytes below 2^32 vertices).
    pub fn vid_bytes(&self) -> usize {
        if (self.vertex_count as u64) < (1u64 << 32) {
            4
        } else {
            8
        }
    }

    /// Size of edge indices in the space formulas (4 bytes below 2^32 edges).
    pub fn eid_bytes(&self) -> usize {
        if (self.edge_count as u64) < (1u64 << 32) {
            4
        } else {
            8
        }
    }
}

/// Splits `g` into the partitions described by `plan`.
pub fn build_partitions(
    g: &CsrGraph,
    plan: &PartitionPlan,
    options: BuildOptions,
) -> Result<PartitionedGraph> {
    let k = plan.partition_count();
    if k > MAX_PARTITIONS {
        return Err(Error::config(format!(
            "{k} partitions exceed the {MAX_PARTITIONS} that edge tags can address"
        )));
    }
    if plan.assignment.len() != g.vertex_count() {
        return Err(Error::validation(format!(
            "plan covers {} vertices but the graph has {}",
            plan.assignment.len(),
            g.vertex_count()
        )));
    }
    let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); k];
    for (v, &p) in plan.assignment.iter().enumerate() {
        members[p as usize].push(v as VertexId);
    }
    for (p, m) in members.iter().enumerate() {
        if m.len() > PAYLOAD_MASK as usize + 1 {
            return Err(Error::Capacity {
                element: plan.elements[p].element_id,
                message: format!("{} vertices exceed the local id range", m.len()),
            });
        }
    }

    let built: Vec<Result<(Partition, Vec<BufferLayout>)>> =
        par::map_index(Mode::Parallel, k, |p| {
            build_one(g, plan, p, &members[p], options)
        });
    let mut partitions = Vec::with_capacity(k);
    let mut outbox_layouts = Vec::with_capacity(k);
    for b in built {
        let (part, outs) = b?;
        partitions.push(part);
        outbox_layouts.push(outs);
    }
    // Inbox q <- p mirrors outbox p -> q.
    for q in 0..k {
        partitions[q].inboxes = (0..k).map(|p| outbox_layouts[p][q].clone()).collect();
    }
    for (p, outs) in outbox_layouts.into_iter().enumerate() {
        partitions[p].outboxes = outs;
    }

    Ok(PartitionedGraph {
        partitions,
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        weighted: g.is_weighted(),
        directed: g.is_directed(),
        reduced: options.reduce_messages,
        assignment: plan.assignment.clone(),
        local_id: plan.local_id.clone(),
    })
}

fn build_one(
    g: &CsrGraph,
    plan: &PartitionPlan,
    p: usize,
    members: &[VertexId],
    options: BuildOptions,
) -> Result<(Partition, Vec<BufferLayout>)> {
    let k = plan.partition_count();
    let owner = |v: VertexId| plan.assignment[v as usize] as usize;
    let local = |v: VertexId| plan.local_id[v as usize];

    // Remote references per destination partition: (remote local id, edge ordinal).
    let mut remote_refs: Vec<Vec<(u32, usize)>> = vec![Vec::new(); k];
    let mut ordinal = 0usize;
    for &u in members {
        for &v in g.neighbors(u) {
            let q = owner(v);
            if q != p {
                remote_refs[q].push((local(v), ordinal));
            }
            ordinal += 1;
        }
    }

    // Slot of every remote edge ordinal, and the outbox layouts.
    let mut slot_of = vec![0u32; ordinal];
    let mut outboxes = vec![BufferLayout::default(); k];
    for (q, refs) in remote_refs.iter_mut().enumerate() {
        if refs.is_empty() {
            continue;
        }
        refs.sort_unstable();
        let mut ids = Vec::new();
        for &(rid, e) in refs.iter() {
            let fresh = !options.reduce_messages || ids.last() != Some(&rid);
            if fresh {
                ids.push(rid);
            }
            slot_of[e] = (ids.len() - 1) as u32;
        }
        if ids.len() > PAYLOAD_MASK as usize + 1 {
            return Err(Error::Capacity {
                element: plan.elements[p].element_id,
                message: format!("outbox to partition {q} needs {} slots", ids.len()),
            });
        }
        outboxes[q].remote_vertex_ids = ids;
    }
    drop(remote_refs);

    let n = members.len();
    let m = ordinal;
    let mut row_offsets = Vec::with_capacity(n + 1);
    let mut remote_start = Vec::with_capacity(n);
    let mut targets = Vec::with_capacity(m);
    let src_weights = g.weights();
    let mut weights = src_weights.map(|_| Vec::with_capacity(m));
    row_offsets.push(0);
    let mut ordinal = 0usize;
    for &u in members {
        let nbrs = g.neighbors(u);
        let ws = g.edge_weights(u);
        for (i, &v) in nbrs.iter().enumerate() {
            if owner(v) == p {
                targets.push(EncodedTarget::new(p, local(v)));
                if let (Some(w), Some(ws)) = (weights.as_mut(), ws) {
                    w.push(ws[i]);
                }
            }
        }
        remote_start.push(targets.len());
        for (i, &v) in nbrs.iter().enumerate() {
            let q = owner(v);
            if q != p {
                targets.push(EncodedTarget::new(q, slot_of[ordinal + i]));
                if let (Some(w), Some(ws)) = (weights.as_mut(), ws) {
                    w.push(ws[i]);
                }
            }
        }
        ordinal += nbrs.len();
        row_offsets.push(targets.len());
    }

    let part = Partition {
        index: p,
        element: plan.elements[p].clone(),
        row_offsets,
        remote_start,
        targets,
        weights,
        global_ids: members.to_vec(),
        outboxes: Vec::new(),
        inboxes: Vec::new(),
    };
    Ok((part, outboxes))
}
