use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use frmod_core::estimate::{
    hilbert_transform, lemma_d1_remainder, periodogram, rice_demodulate, sample_acvf,
};
use frmod_core::simulate::gaussian_wn;
use frmod_core::Companion;

fn estimators(c: &mut Criterion) {
    let x = gaussian_wn(3, 1 << 14, 1).unwrap().remove(0);
    c.bench_function("sample_acvf_n16384_h100", |b| {
        b.iter(|| sample_acvf(black_box(&x), 100).unwrap())
    });
    c.bench_function("periodogram_n16384", |b| {
        b.iter(|| periodogram(black_box(&x)).unwrap())
    });
    c.bench_function("hilbert_n16384", |b| {
        b.iter(|| hilbert_transform(black_box(&x)).unwrap())
    });
    c.bench_function("rice_demodulate_n16384", |b| {
        b.iter(|| rice_demodulate(black_box(&x), 0.7, &Companion::Hilbert).unwrap())
    });
}

fn remainder(c: &mut Criterion) {
    let omega = 2f64.powi(-8);
    c.bench_function("lemma_d1_remainder_w2e-8", |b| {
        b.iter(|| lemma_d1_remainder(0.3, black_box(omega), (1024.0 / omega) as usize).unwrap())
    });
}

criterion_group!(benches, estimators, remainder);
criterion_main!(benches);
