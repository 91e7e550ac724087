//! Parallel vs sequential assembly of the three hot kernels.
//!
//! Run with `cargo bench` (parallel feature on, the default) to compare the
//! rayon-backed paths against the always-sequential baselines. Results are
//! bitwise identical between the two; only throughput differs.

use criterion::{criterion_group, criterion_main, Criterion};

use atomkit::disc::{sampling_matrix, sampling_matrix_seq, DiscPartition};
use atomkit::gabor::GaborSystem;
use atomkit::probes::gabor_random_probe;

fn bench_stft(c: &mut Criterion) {
    let sys = GaborSystem::new(64, 4, 4).unwrap();
    let f = gabor_random_probe(64, 1).unwrap();
    let mut g = c.benchmark_group("stft_table");
    g.bench_function("parallel", |b| b.iter(|| sys.stft_table(&f).unwrap()));
    g.bench_function("sequential", |b| b.iter(|| sys.stft_table_seq(&f).unwrap()));
    g.finish();
}

fn bench_frame_operator(c: &mut Criterion) {
    let sys = GaborSystem::new(64, 4, 4).unwrap();
    let mut g = c.benchmark_group("frame_operator");
    g.bench_function("parallel", |b| b.iter(|| sys.frame_operator()));
    g.bench_function("sequential", |b| b.iter(|| sys.frame_operator_seq()));
    g.finish();
}

fn bench_sampling_matrix(c: &mut Criterion) {
    let p = DiscPartition::build(6).unwrap();
    let mut g = c.benchmark_group("disc_sampling_matrix");
    g.sample_size(20);
    g.bench_function("parallel", |b| b.iter(|| sampling_matrix(&p, 32)));
    g.bench_function("sequential", |b| b.iter(|| sampling_matrix_seq(&p, 32)));
    g.finish();
}

criterion_group!(benches, bench_stft, bench_frame_operator, bench_sampling_matrix);
criterion_main!(benches);
