//! Sequential against rayon-parallel execution of the same plans.
//!
//! Without the `parallel` feature both groups take the sequential path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use hgraph::engine::EngineConfig;
use hgraph::graph::{generate_rmat, RmatParams};
use hgraph::par::Mode;
use hgraph::partition::{host_and_accelerators, Strategy};
use hgraph::runner::{AlgorithmKind, RunSpec, Workload};

const SCALE: u32 = 14;

fn spec(mode: Mode) -> RunSpec {
    RunSpec {
        engine: EngineConfig {
            mode,
            ..Default::default()
        },
        ..Default::default()
    }
}

fn kernels(c: &mut Criterion) {
    let g = generate_rmat(SCALE, 16, RmatParams::default(), 1).unwrap();
    let sym = g.symmetrize();
    let mut group = c.benchmark_group("kernels");
    group.sample_size(10);
    group.throughput(Throughput::Elements(g.edge_count() as u64));
    for kind in [AlgorithmKind::Bfs, AlgorithmKind::Pagerank, AlgorithmKind::Cc] {
        let graph = if kind == AlgorithmKind::Cc { &sym } else { &g };
        let w = Workload::new(kind, graph);
        let plan = w.plan(Strategy::High, 0.5, host_and_accelerators(1), 0).unwrap();
        for mode in [Mode::Sequential, Mode::Parallel] {
            let id = BenchmarkId::new(kind.as_str(), format!("{mode:?}").to_lowercase());
            let spec = spec(mode);
            group.bench_with_input(id, &spec, |b, spec| b.iter(|| black_box(w.run(&plan, spec).unwrap())));
        }
    }
    group.finish();
}

fn partition_counts(c: &mut Criterion) {
    let g = generate_rmat(SCALE, 16, RmatParams::default(), 2).unwrap();
    let w = Workload::new(AlgorithmKind::Bfs, &g);
    let mut group = c.benchmark_group("bfs_partitions");
    group.sample_size(10);
    for accels in [0, 1, 3] {
        let plan = w.plan(Strategy::Rand, 0.5, host_and_accelerators(accels), 0).unwrap();
        for mode in [Mode::Sequential, Mode::Parallel] {
            let id = BenchmarkId::new(format!("{mode:?}").to_lowercase(), accels + 1);
            let spec = spec(mode);
            group.bench_with_input(id, &spec, |b, spec| b.iter(|| black_box(w.run(&plan, spec).unwrap())));
        }
    }
    group.finish();
}

criterion_group!(benches, kernels, partition_counts);
criterion_main!(benches);
