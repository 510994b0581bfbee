use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use sullivan_bench::pseudo_random_matrix;
use sullivan_core::linalg::rank;
use sullivan_core::{
    chevalley_eilenberg, cohomology_summary, construct_minimal_model, projective_model, sphere_model, torus_model,
    LieAlgebra, DEFAULT_KILL_CAP,
};

fn rref(c: &mut Criterion) {
    let mut group = c.benchmark_group("rank");
    // 40 columns takes the dense path, 96 the sparse one
    for n in [20usize, 40, 96] {
        let m = pseudo_random_matrix(n, n, 30, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| rank(black_box(m))));
    }
    group.finish();
}

fn cohomology(c: &mut Criterion) {
    let mut group = c.benchmark_group("cohomology");
    group.bench_function("torus 6", |b| {
        b.iter(|| {
            // fresh algebra each time so the per-degree cache does not hide the work
            let t = torus_model(6).into_presented();
            cohomology_summary(&t, 6).unwrap()
        })
    });
    group.bench_function("filiform4 CE", |b| {
        b.iter(|| {
            let a = chevalley_eilenberg(&LieAlgebra::filiform4()).unwrap().into_presented();
            cohomology_summary(&a, 4).unwrap()
        })
    });
    group.finish();
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("minimal model");
    group.bench_function("S^2 through 8", |b| {
        b.iter(|| construct_minimal_model(Arc::new(sphere_model(2).unwrap()), 8, DEFAULT_KILL_CAP).unwrap())
    });
    group.bench_function("CP^3 through 8", |b| {
        b.iter(|| construct_minimal_model(Arc::new(projective_model(3).unwrap()), 8, DEFAULT_KILL_CAP).unwrap())
    });
    group.sample_size(10);
    group.bench_function("filiform4 through 3", |b| {
        b.iter(|| {
            let a = chevalley_eilenberg(&LieAlgebra::filiform4()).unwrap().into_presented();
            construct_minimal_model(Arc::new(a), 3, DEFAULT_KILL_CAP).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, rref, cohomology, construction);
criterion_main!(benches);
