use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    Algorithm, ComputeContext, ComputeOutcome, Direction, EngineConfig, Ledger, Partition,
    PartitionedGraph, Payload, PhaseEntry, SlotArray,
};
use crate::error::{Error, Result};
use crate::par::{self, Mode};

/// Output of [`run`]. `output` is `None` when a callback aborted the run;
/// the ledger then covers the supersteps that did execute.
#[derive(Debug)]
pub struct EngineRun<O> {
    pub output: Option<O>,
    pub ledger: Ledger,
    pub aborted: Option<String>,
}

impl<O> EngineRun<O> {
    /// The output, or an [`Error::Aborted`] carrying the abort reason.
    pub fn into_output(self) -> Result<O> {
        match (self.output, self.aborted) {
            (Some(o), None) => Ok(o),
            (_, reason) => Err(Error::Aborted {
                reason: reason.unwrap_or_else(|| "no output".into()),
                supersteps: self.ledger.supersteps,
            }),
        }
    }
}

/// Worker pool of one processing element.
struct Workers {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Workers {
    fn new(mode: Mode, worker_count: usize) -> Result<Self> {
        #[cfg(feature = "parallel")]
        {
            let pool = if mode.is_parallel() {
                let threads = worker_count.clamp(1, par::available_threads());
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
                Some(pool)
            } else {
                None
            };
            Ok(Workers { pool })
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = (mode, worker_count);
            Ok(Workers {})
        }
    }

    fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            return pool.install(f);
        }
        f()
    }
}

/// Runs one job per partition, concurrently or one after another in `order`.
fn fan_out<T, F>(concurrent: bool, order: &[usize], jobs: Vec<F>) -> Vec<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    if concurrent {
        return std::thread::scope(|scope| {
            let handles: Vec<_> = jobs.into_iter().map(|job| scope.spawn(job)).collect();
            handles
                .into_iter()
                .map(|h| h.join().unwrap_or_else(|e| std::panic::resume_unwind(e)))
                .collect()
        });
    }
    let mut jobs: Vec<Option<F>> = jobs.into_iter().map(Some).collect();
    let mut results: Vec<Option<T>> = jobs.iter().map(|_| None).collect();
    for &i in order {
        let job = jobs[i].take().expect("each partition runs once");
        results[i] = Some(job());
    }
    results
        .into_iter()
        .map(|r| r.expect("every partition ran"))
        .collect()
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

/// Executes `alg` over the partitions of `pg` until every partition votes to
/// finish in the same superstep, or the algorithm's superstep cap is reached.
pub fn run<A: Algorithm>(
    pg: &PartitionedGraph,
    alg: &A,
    cfg: &EngineConfig,
) -> Result<EngineRun<A::Output>> {
    let k = pg.partition_count();
    let parts = &pg.partitions;
    let mode = cfg.mode;
    let identity = alg.identity();
    let id_bits = identity.to_bits();
    let wire = A::Message::WIRE_BYTES as u64;
    let direction = alg.direction();

    let workers: Vec<Workers> = parts
        .iter()
        .map(|p| Workers::new(mode, p.element.worker_count))
        .collect::<Result<_>>()?;
    let concurrent = mode.is_parallel() && k > 1 && par::available_threads() > 1;

    let slots: Vec<SlotArray<A::Message>> = parts
        .iter()
        .map(|p| SlotArray::new(p.vertex_count(), identity))
        .collect();
    let outboxes: Vec<Vec<SlotArray<A::Message>>> = parts
        .iter()
        .map(|p| {
            p.outboxes
                .iter()
                .map(|b| SlotArray::new(b.len(), identity))
                .collect()
        })
        .collect();
    // Two epochs per inbox: values delivered in superstep i live in epoch i % 2.
    let mut inboxes: Vec<Vec<[Vec<u64>; 2]>> = parts
        .iter()
        .map(|p| {
            p.inboxes
                .iter()
                .map(|b| [vec![id_bits; b.len()], vec![id_bits; b.len()]])
                .collect()
        })
        .collect();

    // Every superstep moves whole buffers, so the byte counts are fixed per run.
    let (sent, received): (Vec<u64>, Vec<u64>) = parts
        .iter()
        .map(|p| {
            let (out, inb) = (p.outbox_slots() as u64 * wire, p.inbox_slots() as u64 * wire);
            match direction {
                Direction::Push => (out, inb),
                Direction::Pull => (inb, out),
            }
        })
        .unzip();
    let has_buffers = sent.iter().any(|&b| b > 0);

    let mut states: Vec<A::State> = parts
        .iter()
        .zip(&slots)
        .zip(&workers)
        .map(|((part, s), w)| w.install(|| alg.init(part, s)))
        .collect();

    let max_steps = alg.max_supersteps().unwrap_or(usize::MAX);
    let mut rng = cfg.schedule_seed.map(ChaCha8Rng::seed_from_u64);
    let mut ledger = Ledger::new(k);
    let mut aborted = None;
    let started = Instant::now();

    let mut superstep = 0;
    while superstep < max_steps {
        let epoch = superstep % 2;
        let mut row: Vec<PhaseEntry> = (0..k)
            .map(|p| PhaseEntry {
                superstep,
                partition: p,
                compute_ms: 0.0,
                comm_ms: 0.0,
                bytes_transferred: 0,
                edges: 0,
                compute_wall_ms: 0.0,
                comm_wall_ms: 0.0,
            })
            .collect();

        let mut order: Vec<usize> = (0..k).collect();
        let vertex_orders: Option<Vec<Vec<u32>>> = rng.as_mut().map(|r| {
            order.shuffle(r);
            parts
                .iter()
                .map(|p| {
                    let mut o: Vec<u32> = (0..p.vertex_count() as u32).collect();
                    o.shuffle(r);
                    o
                })
                .collect()
        });

        let mut communicated = false;
        if direction == Direction::Pull && has_buffers {
            let walls = publish(
                alg, parts, &slots, &outboxes, &mut inboxes, &states, &workers, mode, epoch,
                concurrent, &order,
            );
            for (entry, wall) in row.iter_mut().zip(walls) {
                entry.comm_wall_ms += wall;
            }
            communicated = true;
        }

        let jobs: Vec<_> = states
            .iter_mut()
            .enumerate()
            .map(|(p, state)| {
                let ctx = ComputeContext {
                    partition: &parts[p],
                    superstep,
                    slots: &slots[p],
                    outboxes: &outboxes[p],
                    alg,
                    mode,
                    order: vertex_orders.as_ref().map(|o| o[p].as_slice()),
                };
                let worker = &workers[p];
                let throttle = parts[p].element.throttle;
                let pace = cfg.pace_throttled;
                move || {
                    let t = Instant::now();
                    let outcome = worker.install(|| alg.compute(&ctx, state));
                    let wall = ms(t.elapsed());
                    let charged = match throttle {
                        Some(rate) => outcome.edges as f64 / rate * 1e3,
                        None => wall,
                    };
                    if pace && charged > wall {
                        std::thread::sleep(Duration::from_secs_f64((charged - wall) / 1e3));
                    }
                    (outcome, wall, charged)
                }
            })
            .collect();
        let results: Vec<(ComputeOutcome, f64, f64)> = fan_out(concurrent, &order, jobs);

        let mut all_finished = true;
        for (entry, (outcome, wall, charged)) in row.iter_mut().zip(results) {
            entry.edges = outcome.edges;
            entry.compute_wall_ms = wall;
            entry.compute_ms = charged;
            all_finished &= outcome.finished;
            if aborted.is_none() {
                if let Some(reason) = outcome.abort {
                    aborted = Some(format!("partition {}: {reason}", entry.partition));
                }
            }
        }

        if aborted.is_none() && direction == Direction::Push && !all_finished && has_buffers {
            let walls = deliver(
                alg, parts, &slots, &outboxes, &mut inboxes, &states, &workers, mode, epoch,
                superstep, concurrent, &order,
            );
            for (entry, wall) in row.iter_mut().zip(walls) {
                entry.comm_wall_ms += wall;
            }
            communicated = true;
        }

        if communicated {
            for (p, entry) in row.iter_mut().enumerate() {
                entry.bytes_transferred = sent[p];
                entry.comm_ms = match cfg.interconnect_rate {
                    Some(c) => (sent[p] + received[p]) as f64 / (4.0 * c) * 1e3,
                    None => entry.comm_wall_ms,
                };
            }
        }

        ledger.entries.extend(row);
        ledger.supersteps += 1;
        superstep += 1;
        if aborted.is_some() || all_finished {
            break;
        }
    }

    let output = if aborted.is_none() {
        let mut out = alg.new_output(pg.vertex_count);
        for (p, part) in parts.iter().enumerate() {
            alg.collect(part, &slots[p], &states[p], &mut out);
        }
        Some(alg.finalize(out))
    } else {
        None
    };
    ledger.wall_ms = ms(started.elapsed());

    Ok(EngineRun {
        output,
        ledger,
        aborted,
    })
}

/// Push-mode communication: every receiver copies the outboxes aimed at it
/// into its inboxes, resets them, and scatters the non-identity values.
#[allow(clippy::too_many_arguments)]
fn deliver<A: Algorithm>(
    alg: &A,
    parts: &[Partition],
    slots: &[SlotArray<A::Message>],
    outboxes: &[Vec<SlotArray<A::Message>>],
    inboxes: &mut [Vec<[Vec<u64>; 2]>],
    states: &[A::State],
    workers: &[Workers],
    mode: Mode,
    epoch: usize,
    superstep: usize,
    concurrent: bool,
    order: &[usize],
) -> Vec<f64> {
    let id_bits = alg.identity().to_bits();
    let jobs: Vec<_> = inboxes
        .iter_mut()
        .enumerate()
        .map(|(q, inbox)| {
            let (part, state, local, worker) = (&parts[q], &states[q], &slots[q], &workers[q]);
            move || {
                let t = Instant::now();
                worker.install(|| {
                    for (p, buffers) in inbox.iter_mut().enumerate() {
                        if p == q || buffers[epoch].is_empty() {
                            continue;
                        }
                        let out = &outboxes[p][q];
                        let buf = &mut buffers[epoch];
                        for (i, b) in buf.iter_mut().enumerate() {
                            *b = out.raw(i);
                            out.store_raw(i, id_bits);
                        }
                        let buf = &*buf;
                        let ids = &part.inboxes[p].remote_vertex_ids;
                        par::for_each_index(mode, ids.len(), |i| {
                            if buf[i] != id_bits {
                                alg.scatter(state, local, ids[i], Payload::from_bits(buf[i]), superstep);
                            }
                        });
                    }
                });
                ms(t.elapsed())
            }
        })
        .collect();
    fan_out(concurrent, order, jobs)
}

/// Pull-mode communication: every owner gathers the published value of each
/// vertex other partitions reference and copies it into their read buffers.
#[allow(clippy::too_many_arguments)]
fn publish<A: Algorithm>(
    alg: &A,
    parts: &[Partition],
    slots: &[SlotArray<A::Message>],
    outboxes: &[Vec<SlotArray<A::Message>>],
    inboxes: &mut [Vec<[Vec<u64>; 2]>],
    states: &[A::State],
    workers: &[Workers],
    mode: Mode,
    epoch: usize,
    concurrent: bool,
    order: &[usize],
) -> Vec<f64> {
    let jobs: Vec<_> = inboxes
        .iter_mut()
        .enumerate()
        .map(|(q, inbox)| {
            let (part, state, local, worker) = (&parts[q], &states[q], &slots[q], &workers[q]);
            move || {
                let t = Instant::now();
                worker.install(|| {
                    for (p, buffers) in inbox.iter_mut().enumerate() {
                        if p == q || buffers[epoch].is_empty() {
                            continue;
                        }
                        let ids = &part.inboxes[p].remote_vertex_ids;
                        let buf = &mut buffers[epoch];
                        par::for_each_mut(mode, buf, |i, b| {
                            *b = alg.gather(state, local, ids[i]).to_bits();
                        });
                        let dst = &outboxes[p][q];
                        for (i, &b) in buf.iter().enumerate() {
                            dst.store_raw(i, b);
                        }
                    }
                });
                ms(t.elapsed())
            }
        })
        .collect();
    fan_out(concurrent, order, jobs)
}
