use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use onion_bench::{exact_fixture, float_fixture, label, FORMATS};
use onion_core::oracle::degenerate_oracle;
use onion_core::{classify, hyperdet, Tolerance};

fn bench_hyperdet(c: &mut Criterion) {
    let mut group = c.benchmark_group("hyperdet");
    for format in FORMATS {
        let exact = exact_fixture(format);
        let float = float_fixture(format);
        group.bench_with_input(BenchmarkId::new("exact", label(format)), &exact, |b, t| {
            b.iter(|| hyperdet(black_box(t), Tolerance::default()).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("float", label(format)), &float, |b, t| {
            b.iter(|| hyperdet(black_box(t), Tolerance::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for format in FORMATS {
        let exact = exact_fixture(format);
        group.bench_with_input(BenchmarkId::from_parameter(label(format)), &exact, |b, t| {
            b.iter(|| classify(black_box(t), Tolerance::default()).unwrap())
        });
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    for format in [&[2, 2, 2][..], &[3, 2, 2]] {
        let t = float_fixture(format);
        group.bench_with_input(BenchmarkId::from_parameter(label(format)), &t, |b, t| {
            b.iter(|| degenerate_oracle(black_box(t), 16, 1e-8, 1))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_hyperdet, bench_classify, bench_oracle);
criterion_main!(benches);
