use serde::{Deserialize, Serialize};

use super::partition::PartitionedGraph;

/// Bytes one partition needs, split the way the space formulas split it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Footprint {
    pub graph_bytes: u64,
    pub inbox_bytes: u64,
    pub outbox_bytes: u64,
    pub state_bytes: u64,
}

impl Footprint {
    pub fn total(&self) -> u64 {
        self.graph_bytes + self.inbox_bytes + self.outbox_bytes + self.state_bytes
    }
}

/// Counts and widths that determine a partition's footprint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootprintInputs {
    pub vertices: u64,
    pub edges: u64,
    pub inbox_slots: u64,
    pub outbox_slots: u64,
    pub vid_bytes: u64,
    pub eid_bytes: u64,
    /// Size of one communicated value (`s`).
    pub payload_bytes: u64,
    /// 4 for weighted graphs, 0 otherwise.
    pub weight_bytes: u64,
    pub state_bytes_per_vertex: u64,
}

/// `eid·|V_p| + vid·|E_p|` for the graph (plus weights), and
/// `2·(vid + s)` per inbox or outbox slot; the 2 is the double buffer.
pub fn footprint_of(x: FootprintInputs) -> Footprint {
    Footprint {
        graph_bytes: x.eid_bytes * x.vertices + (x.vid_bytes + x.weight_bytes) * x.edges,
        inbox_bytes: 2 * (x.vid_bytes + x.payload_bytes) * x.inbox_slots,
        outbox_bytes: 2 * (x.vid_bytes + x.payload_bytes) * x.outbox_slots,
        state_bytes: x.state_bytes_per_vertex * x.vertices,
    }
}

/// Footprint of partition `p` of a built graph.
pub fn footprint(
    pg: &PartitionedGraph,
    p: usize,
    payload_bytes: usize,
    state_bytes_per_vertex: usize,
) -> Footprint {
    let part = &pg.partitions[p];
    footprint_of(FootprintInputs {
        vertices: part.vertex_count() as u64,
        edges: part.edge_count() as u64,
        inbox_slots: part.inbox_slots() as u64,
        outbox_slots: part.outbox_slots() as u64,
        vid_bytes: pg.vid_bytes() as u64,
        eid_bytes: pg.eid_bytes() as u64,
        payload_bytes: payload_bytes as u64,
        weight_bytes: if pg.weighted { 4 } else { 0 },
        state_bytes_per_vertex: state_bytes_per_vertex as u64,
    })
}
