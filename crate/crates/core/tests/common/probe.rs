//! Kernels that count every value observed in the wrong superstep.

use std::sync::atomic::{AtomicU64, Ordering};

use hgraph::engine::{Algorithm, ComputeContext, ComputeOutcome, Direction, Partition, SlotArray};

/// Local vertices some other partition refers to.
fn remotely_referenced(part: &Partition) -> Vec<bool> {
    let mut seen = vec![false; part.vertex_count()];
    for inbox in &part.inboxes {
        for &l in &inbox.remote_vertex_ids {
            seen[l as usize] = true;
        }
    }
    seen
}

pub struct ProbeState {
    referenced: Vec<bool>,
    violations: AtomicU64,
}

fn finish(state: &ProbeState) -> ComputeOutcome {
    match state.violations.load(Ordering::Relaxed) {
        0 => ComputeOutcome::vote(false, 0),
        n => ComputeOutcome::abort(format!("{n} values crossed a superstep boundary")),
    }
}

/// Push: in superstep `s` every vertex sends `s + 1` to its remote
/// neighbors only, so at compute `s` a referenced vertex must hold exactly
/// `s`, never `s + 1`, and an unreferenced one must hold nothing.
pub struct PushProbe {
    pub supersteps: usize,
}

impl Algorithm for PushProbe {
    type Message = u32;
    type State = ProbeState;
    type Output = ();

    fn name(&self) -> &'static str {
        "push-probe"
    }

    fn identity(&self) -> u32 {
        0
    }

    fn combine(&self, a: u32, b: u32) -> u32 {
        a.max(b)
    }

    fn max_supersteps(&self) -> Option<usize> {
        Some(self.supersteps)
    }

    fn init(&self, part: &Partition, _slots: &SlotArray<u32>) -> ProbeState {
        ProbeState {
            referenced: remotely_referenced(part),
            violations: AtomicU64::new(0),
        }
    }

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut ProbeState) -> ComputeOutcome {
        let s = ctx.superstep as u32;
        let part = ctx.partition;
        let state = &*state;
        ctx.for_each_vertex(|v| {
            let expect = if state.referenced[v as usize] { s } else { 0 };
            if ctx.slots.load(v as usize) != expect {
                state.violations.fetch_add(1, Ordering::Relaxed);
            }
            for &t in &part.targets()[part.remote_edges(v)] {
                ctx.write(t, s + 1);
            }
        });
        finish(state)
    }

    fn new_output(&self, _vertex_count: usize) {}

    fn collect(&self, _part: &Partition, _slots: &SlotArray<u32>, _state: &ProbeState, _out: &mut ()) {}
}

/// Pull: at compute `s` each vertex publishes `s + 1`; a remote read during
/// compute `s` must return the value published after superstep `s - 1`.
pub struct PullProbe {
    pub supersteps: usize,
}

impl Algorithm for PullProbe {
    type Message = u32;
    type State = ProbeState;
    type Output = ();

    fn name(&self) -> &'static str {
        "pull-probe"
    }

    fn direction(&self) -> Direction {
        Direction::Pull
    }

    fn identity(&self) -> u32 {
        0
    }

    fn combine(&self, a: u32, b: u32) -> u32 {
        a.max(b)
    }

    fn max_supersteps(&self) -> Option<usize> {
        Some(self.supersteps)
    }

    fn init(&self, part: &Partition, _slots: &SlotArray<u32>) -> ProbeState {
        ProbeState {
            referenced: remotely_referenced(part),
            violations: AtomicU64::new(0),
        }
    }

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut ProbeState) -> ComputeOutcome {
        let s = ctx.superstep as u32;
        let part = ctx.partition;
        let state = &*state;
        ctx.for_each_vertex(|v| {
            for &t in &part.targets()[part.remote_edges(v)] {
                if ctx.read(t) != s {
                    state.violations.fetch_add(1, Ordering::Relaxed);
                }
            }
            ctx.slots.store(v as usize, s + 1);
        });
        finish(state)
    }

    fn new_output(&self, _vertex_count: usize) {}

    fn collect(&self, _part: &Partition, _slots: &SlotArray<u32>, _state: &ProbeState, _out: &mut ()) {}
}
