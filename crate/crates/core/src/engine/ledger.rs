use serde::{Deserialize, Serialize};

/// Timing of one partition in one superstep.
///
/// `compute_ms` and `comm_ms` are the charged times that feed the makespan.
/// They equal the wall-clock measurements unless the element is throttled
/// or the interconnect is emulated, in which case they come from the
/// emulated clock and the wall times are kept alongside for reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseEntry {
    pub superstep: usize,
    pub partition: usize,
    pub compute_ms: f64,
    pub comm_ms: f64,
    /// Bytes this partition put on the interconnect.
    pub bytes_transferred: u64,
    pub edges: u64,
    pub compute_wall_ms: f64,
    pub comm_wall_ms: f64,
}

impl PhaseEntry {
    pub fn total_ms(&self) -> f64 {
        self.compute_ms + self.comm_ms
    }
}

/// Per-superstep, per-partition phase record of one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Ledger {
    pub partitions: usize,
    pub supersteps: usize,
    /// Ordered by superstep, then partition.
    pub entries: Vec<PhaseEntry>,
    pub wall_ms: f64,
}

impl Ledger {
    pub fn new(partitions: usize) -> Self {
        Ledger {
            partitions,
            ..Default::default()
        }
    }

    pub fn superstep(&self, s: usize) -> &[PhaseEntry] {
        let k = self.partitions;
        &self.entries[s * k..(s + 1) * k]
    }

    /// Eq. 2 for one superstep: the slowest partition's compute plus communication.
    pub fn superstep_makespan(&self, s: usize) -> f64 {
        self.superstep(s)
            .iter()
            .map(PhaseEntry::total_ms)
            .fold(0.0, f64::max)
    }

    /// Index of the partition that bounds superstep `s`.
    pub fn bottleneck(&self, s: usize) -> usize {
        let row = self.superstep(s);
        let mut best = 0;
        for (i, e) in row.iter().enumerate() {
            if e.total_ms() > row[best].total_ms() {
                best = i;
            }
        }
        best
    }

    pub fn makespan_ms(&self) -> f64 {
        (0..self.supersteps).map(|s| self.superstep_makespan(s)).sum()
    }

    pub fn bytes_transferred(&self) -> u64 {
        self.entries.iter().map(|e| e.bytes_transferred).sum()
    }

    pub fn edges_traversed(&self) -> u64 {
        self.entries.iter().map(|e| e.edges).sum()
    }

    /// Σ over supersteps of (compute, comm) per partition.
    pub fn partition_totals(&self) -> Vec<(f64, f64)> {
        let mut totals = vec![(0.0, 0.0); self.partitions];
        for e in &self.entries {
            totals[e.partition].0 += e.compute_ms;
            totals[e.partition].1 += e.comm_ms;
        }
        totals
    }

    /// Appends another run's ledger after this one, renumbering its supersteps.
    pub fn extend(&mut self, other: Ledger) {
        assert_eq!(self.partitions, other.partitions);
        let offset = self.supersteps;
        self.entries
            .extend(other.entries.into_iter().map(|mut e| {
                e.superstep += offset;
                e
            }));
        self.supersteps += other.supersteps;
        self.wall_ms += other.wall_ms;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(superstep: usize, partition: usize, compute_ms: f64, comm_ms: f64) -> PhaseEntry {
        PhaseEntry {
            superstep,
            partition,
            compute_ms,
            comm_ms,
            bytes_transferred: 0,
            edges: 0,
            compute_wall_ms: compute_ms,
            comm_wall_ms: comm_ms,
        }
    }

    #[test]
    fn makespan_is_sum_of_superstep_maxima() {
        let mut l = Ledger::new(2);
        l.entries = vec![
            entry(0, 0, 2.0, 0.5),
            entry(0, 1, 1.0, 0.5),
            entry(1, 0, 1.0, 0.0),
            entry(1, 1, 3.0, 0.0),
        ];
        l.supersteps = 2;
        assert_eq!(l.superstep_makespan(0), 2.5);
        assert_eq!(l.bottleneck(1), 1);
        assert_eq!(l.makespan_ms(), 5.5);
        assert_eq!(l.partition_totals(), vec![(3.0, 0.5), (4.0, 0.5)]);
    }

    #[test]
    fn extend_renumbers() {
        let mut a = Ledger::new(1);
        a.entries = vec![entry(0, 0, 1.0, 0.0)];
        a.supersteps = 1;
        let mut b = Ledger::new(1);
        b.entries = vec![entry(0, 0, 2.0, 0.0)];
        b.supersteps = 1;
        a.extend(b);
        assert_eq!(a.entries[1].superstep, 1);
        assert_eq!(a.makespan_ms(), 3.0);
    }
}
