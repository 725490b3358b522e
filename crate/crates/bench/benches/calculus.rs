use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nelab_bench::operators;
use nelab_core::{apply_calculus, oracle_truncated, EntireFunction, Field, Scalar};

fn calculus(c: &mut Criterion) {
    let (_, ops) = operators("l2(6)", Field::Complex, 16);
    let lambda = Scalar::new(0.8, -1.1);
    let mut group = c.benchmark_group("calculus");
    for name in ["exp", "cosh", "poly:1,-2,0.5,3"] {
        let g = EntireFunction::parse(name).unwrap();
        group.bench_with_input(BenchmarkId::new("closed_form", name), &g, |b, g| {
            b.iter(|| {
                ops.iter()
                    .map(|t| apply_calculus(g, black_box(lambda), t))
                    .fold(Scalar::default(), |s, (a, b)| s + a + b)
            })
        });
        group.bench_with_input(BenchmarkId::new("truncated_series_64", name), &g, |b, g| {
            b.iter(|| {
                for t in &ops {
                    black_box(oracle_truncated(g, lambda, t, 64).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, calculus);
criterion_main!(benches);
