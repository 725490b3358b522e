use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nelab_bench::{operators, SPACES};
use nelab_core::opnorm::affine_matrix;
use nelab_core::{matrix_norm_oracle, norm_affine_rankone, real, Field};

fn engine(c: &mut Criterion) {
    let mut group = c.benchmark_group("norm_affine_rankone");
    for dsl in SPACES {
        let (space, ops) = operators(dsl, Field::Real, 16);
        group.bench_with_input(BenchmarkId::from_parameter(dsl), &ops, |b, ops| {
            b.iter(|| {
                for t in ops {
                    black_box(norm_affine_rankone(&space, real(1.0), real(-0.7), t).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("matrix_norm_oracle");
    for dsl in ["linf(4)", "l1(4)", "sum2(l1(2),linf(2))"] {
        let (space, ops) = operators(dsl, Field::Real, 16);
        let mats: Vec<_> = ops.iter().map(|t| affine_matrix(real(1.0), real(-0.7), t)).collect();
        group.bench_with_input(BenchmarkId::from_parameter(dsl), &mats, |b, mats| {
            b.iter(|| {
                for m in mats {
                    black_box(matrix_norm_oracle(&space, m).unwrap());
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, engine, oracle);
criterion_main!(benches);
