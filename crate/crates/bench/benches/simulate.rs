use std::f64::consts::FRAC_PI_4;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use frmod_core::simulate::{simulate_exact, simulate_modulated, simulate_truncated};
use frmod_core::{FrmodSpec, Model};

fn exact(c: &mut Criterion) {
    let model: Model = FrmodSpec::basic(0.2, 1.0, 1.0, 0.5).unwrap().into();
    let mut group = c.benchmark_group("simulate_exact");
    group.sample_size(20);
    for n in [1usize << 10, 1 << 12] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| simulate_exact(&model, n, black_box(1)).unwrap())
        });
    }
    group.finish();
}

fn linear(c: &mut Criterion) {
    let spec = FrmodSpec::basic(0.4, FRAC_PI_4, 1.0, 3.0).unwrap();
    let mut group = c.benchmark_group("simulate_linear");
    group.sample_size(20);
    group.bench_function("truncated_n4096_k10000", |b| {
        b.iter(|| simulate_truncated(&spec, 4096, black_box(1), 10_000).unwrap())
    });
    group.bench_function("modulated_n4096_k10000", |b| {
        b.iter(|| simulate_modulated(&spec, 4096, black_box(1), 10_000).unwrap())
    });
    group.finish();
}

criterion_group!(benches, exact, linear);
criterion_main!(benches);
