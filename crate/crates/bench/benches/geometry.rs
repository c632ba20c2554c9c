use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use starpf_bench::{ellipse, square};
use starpf_core::approximation::build_smooth_approximation;
use starpf_core::geometry::{Point, ScalarField};
use starpf_core::transforms::scalar_lipschitz;

fn fields(c: &mut Criterion) {
    let d = ellipse();
    let x = Point::new(0.7, -0.3);
    c.bench_function("gauge 256-gon", |b| b.iter(|| d.gauge(black_box(&x))));
    c.bench_function("oriented distance 256-gon", |b| b.iter(|| d.oriented_distance(black_box(&x))));
    c.bench_function("lipschitz 1e4 pairs", |b| {
        b.iter(|| scalar_lipschitz(ScalarField::OrientedDistance, &d, 10_000, 0).unwrap())
    });
}

fn approximation(c: &mut Criterion) {
    let s = square();
    let mut group = c.benchmark_group("approximation");
    group.sample_size(10);
    group.bench_function("square eps 0.1, 1024 rays", |b| {
        b.iter(|| build_smooth_approximation(s.clone(), 0.1, 1024).unwrap())
    });
    group.finish();
}

criterion_group!(benches, fields, approximation);
criterion_main!(benches);
