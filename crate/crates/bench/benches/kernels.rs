use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pseudopowers_core::lemmasums::{distinct_ordered_sum_convolution, weight_convolution};
use pseudopowers_core::model::sample_sequence;
use pseudopowers_core::sumset::s_fold_sumset;

fn sumsets(c: &mut Criterion) {
    let mut group = c.benchmark_group("sumset");
    group.sample_size(10);
    for limit in [100_000u64, 1_000_000] {
        let a = sample_sequence(2, limit, 1, 0).unwrap();
        group.bench_with_input(BenchmarkId::new("shifted_or", limit), &a, |b, a| {
            b.iter(|| s_fold_sumset(black_box(a.elements()), 2, limit, false))
        });
        group.bench_with_input(BenchmarkId::new("distinct_layers", limit), &a, |b, a| {
            b.iter(|| s_fold_sumset(black_box(a.elements()), 2, limit, true))
        });
    }
    let a = sample_sequence(3, 1_000_000, 1, 0).unwrap();
    group.bench_function("distinct_layers_s3/1000000", |b| {
        b.iter(|| s_fold_sumset(black_box(a.elements()), 3, 1_000_000, true))
    });
    group.finish();
}

fn convolutions(c: &mut Criterion) {
    let mut group = c.benchmark_group("lemmasums");
    group.sample_size(10);
    for z in [2_000u64, 8_000] {
        group.bench_with_input(BenchmarkId::new("weight_convolution_s3", z), &z, |b, &z| {
            b.iter(|| weight_convolution(3, 3, black_box(z)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("ordered_sum_s3", z), &z, |b, &z| {
            b.iter(|| distinct_ordered_sum_convolution(3, black_box(z), 1).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sumsets, convolutions);
criterion_main!(benches);
