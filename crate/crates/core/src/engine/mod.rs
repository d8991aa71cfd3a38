//! Bulk-synchronous execution over partitions.
//!
//! Each superstep runs a compute phase on every partition, then a
//! communication phase that moves boundary values between partitions, then
//! evaluates the termination vote. Values written during compute of
//! superstep `i` reach their owner only in the communication phase that
//! follows, so compute of superstep `i + 1` is the first to observe them.

mod encoding;
mod footprint;
mod ledger;
mod partition;
mod run;
mod slots;

pub use encoding::{EncodedTarget, Payload, MAX_PARTITIONS, PAYLOAD_BITS, TAG_BITS};
pub use footprint::{footprint, footprint_of, Footprint, FootprintInputs};
pub use ledger::{Ledger, PhaseEntry};
pub use partition::{build_partitions, BufferLayout, BuildOptions, Partition, PartitionedGraph};
pub use run::{run, EngineRun};
pub use slots::SlotArray;

use serde::{Deserialize, Serialize};

use crate::par::{self, Mode};

/// Which way boundary values travel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Sources fold values into their targets' slots; outboxes carry the folds.
    Push,
    /// Vertices read their neighbours' published values; owners refresh the
    /// copies held by referencing partitions before each compute phase.
    Pull,
}

/// Result of one partition's compute phase.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ComputeOutcome {
    pub finished: bool,
    pub edges: u64,
    pub abort: Option<String>,
}

impl ComputeOutcome {
    pub fn vote(finished: bool, edges: u64) -> Self {
        ComputeOutcome {
            finished,
            edges,
            abort: None,
        }
    }

    pub fn abort(reason: impl Into<String>) -> Self {
        ComputeOutcome {
            finished: true,
            edges: 0,
            abort: Some(reason.into()),
        }
    }
}

/// Callbacks that define a graph algorithm.
///
/// Each partition keeps one `Message`-typed slot per local vertex (the state
/// that remote writes land in) plus whatever else the algorithm puts in
/// `State`. `combine` must be associative and commutative with `identity`
/// as its neutral element.
pub trait Algorithm: Sync {
    type Message: Payload;
    type State: Send + Sync;
    type Output: Send;

    fn name(&self) -> &'static str;

    fn direction(&self) -> Direction {
        Direction::Push
    }

    fn identity(&self) -> Self::Message;

    fn combine(&self, a: Self::Message, b: Self::Message) -> Self::Message;

    fn max_supersteps(&self) -> Option<usize> {
        None
    }

    /// Bytes of algorithm state per vertex, for footprint reports.
    fn state_bytes_per_vertex(&self) -> usize {
        Self::Message::WIRE_BYTES
    }

    fn init(&self, part: &Partition, slots: &SlotArray<Self::Message>) -> Self::State;

    fn compute(&self, ctx: &ComputeContext<'_, Self>, state: &mut Self::State) -> ComputeOutcome;

    /// Applies one delivered value to a local vertex (push mode).
    fn scatter(
        &self,
        state: &Self::State,
        slots: &SlotArray<Self::Message>,
        local: u32,
        value: Self::Message,
        superstep: usize,
    ) {
        let _ = (state, superstep);
        slots.fold(local as usize, value, |a, b| self.combine(a, b));
    }

    /// Value a vertex exposes to other partitions (pull mode).
    fn gather(&self, state: &Self::State, slots: &SlotArray<Self::Message>, local: u32) -> Self::Message {
        let _ = state;
        slots.load(local as usize)
    }

    fn new_output(&self, vertex_count: usize) -> Self::Output;

    /// Copies a partition's results into the global output.
    fn collect(
        &self,
        part: &Partition,
        slots: &SlotArray<Self::Message>,
        state: &Self::State,
        out: &mut Self::Output,
    );

    fn finalize(&self, out: Self::Output) -> Self::Output {
        out
    }
}

/// Engine settings that do not depend on the algorithm.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub mode: Mode,
    /// When set, vertex loops and sequential partition order are shuffled
    /// per superstep from this seed.
    pub schedule_seed: Option<u64>,
    /// Emulated interconnect rate `c`, in edges per second at 4 bytes per edge.
    /// When unset, communication is charged its measured wall time.
    pub interconnect_rate: Option<f64>,
    /// Sleep so that throttled elements also take their throttled time in wall-clock terms.
    pub pace_throttled: bool,
}

/// What a compute callback sees of its partition during one superstep.
pub struct ComputeContext<'a, A: Algorithm + ?Sized> {
    pub partition: &'a Partition,
    pub superstep: usize,
    pub slots: &'a SlotArray<A::Message>,
    outboxes: &'a [SlotArray<A::Message>],
    alg: &'a A,
    mode: Mode,
    order: Option<&'a [u32]>,
}

impl<'a, A: Algorithm + ?Sized> ComputeContext<'a, A> {
    /// Folds `value` into the target's slot, local or outbox, and returns
    /// the slot's previous value.
    #[inline]
    pub fn write(&self, t: EncodedTarget, value: A::Message) -> A::Message {
        let slots = if t.tag() == self.partition.index {
            self.slots
        } else {
            &self.outboxes[t.tag()]
        };
        slots.fold(t.payload() as usize, value, |a, b| self.alg.combine(a, b))
    }

    /// Current value of the target's slot, local or outbox.
    #[inline]
    pub fn read(&self, t: EncodedTarget) -> A::Message {
        if t.tag() == self.partition.index {
            self.slots.load(t.payload() as usize)
        } else {
            self.outboxes[t.tag()].load(t.payload() as usize)
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Calls `f` on every local vertex, possibly in parallel and in a shuffled order.
    pub fn for_each_vertex<F>(&self, f: F)
    where
        F: Fn(u32) + Sync + Send,
    {
        match self.order {
            Some(order) => par::for_each_in(self.mode, order, |v| f(v as u32)),
            None => par::for_each_index(self.mode, self.partition.vertex_count(), |v| f(v as u32)),
        }
    }

    /// Sums `f` over every local vertex; same scheduling as [`Self::for_each_vertex`].
    pub fn sum_vertices<F>(&self, f: F) -> u64
    where
        F: Fn(u32) -> u64 + Sync + Send,
    {
        match self.order {
            Some(order) => par::sum_in(self.mode, order, |v| f(v as u32)),
            None => par::sum_index(self.mode, self.partition.vertex_count(), |v| f(v as u32)),
        }
    }
}
