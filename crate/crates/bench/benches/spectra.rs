use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use starpf_bench::square;
use starpf_core::derham::assemble_complex;
use starpf_core::spectra::{dense_pencil_spectrum, domain_mesh, pencil_spectrum, spectrum_report};

fn assembly(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble");
    for rings in [8, 16, 32] {
        let mesh = domain_mesh(square(), rings).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(rings), &mesh, |b, m| b.iter(|| assemble_complex(m).unwrap()));
    }
    group.finish();
}

fn eigensolvers(c: &mut Criterion) {
    let complex = assemble_complex(&domain_mesh(square(), 12).unwrap()).unwrap();
    let mut group = c.benchmark_group("edge pencil, rings 12");
    group.sample_size(10);
    group.bench_function("krylov", |b| b.iter(|| pencil_spectrum(&complex, 1, 5).unwrap()));
    group.bench_function("dense", |b| b.iter(|| dense_pencil_spectrum(&complex, 1, 5).unwrap()));
    group.finish();
}

fn report(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum report");
    group.sample_size(10);
    for rings in [16, 32] {
        group.bench_with_input(BenchmarkId::from_parameter(rings), &rings, |b, &r| {
            b.iter(|| spectrum_report(square(), r).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, assembly, eigensolvers, report);
criterion_main!(benches);
