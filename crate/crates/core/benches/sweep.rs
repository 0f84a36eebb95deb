//! Sequential vs rayon-parallel BER sweeps. Without the `parallel` feature
//! both variants run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use ssconv::channel::ChannelKind;
use ssconv::cli::{ber_sweep, Decision, SweepConfig};
use ssconv::exec::Execution;
use ssconv::StateSpaceEncoder;

fn bench_sweep(c: &mut Criterion) {
    let enc = StateSpaceEncoder::rsc_example();
    let mut group = c.benchmark_group("ber_sweep");
    group.sample_size(10);
    for trials in [64usize, 512] {
        let mut cfg = SweepConfig::new(ChannelKind::Awgn, vec![2.0, 4.0], trials, 256, 7);
        cfg.decision = Decision::Soft;
        group.throughput(Throughput::Elements((trials * 256 * 2) as u64));
        for (name, exec) in [
            ("sequential", Execution::Sequential),
            ("parallel", Execution::Parallel),
        ] {
            cfg.execution = exec;
            group.bench_with_input(BenchmarkId::new(name, trials), &cfg, |b, cfg| {
                b.iter(|| ber_sweep(&enc, black_box(cfg)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
