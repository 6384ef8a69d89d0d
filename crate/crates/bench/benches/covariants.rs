use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gfe_bench::{curve, twist};
use gfe_core::localtest::local_test;
use gfe_core::CovariantSet;

fn covariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("covariants");
    for label in ["C1", "C5", "C10"] {
        let f = curve(label);
        g.bench_with_input(BenchmarkId::new("set", label), &f, |b, f| b.iter(|| CovariantSet::new(f).unwrap()));
    }
    let f = twist(-3, 5);
    let cov = CovariantSet::new(&f).unwrap();
    g.sample_size(10);
    g.bench_function("syzygy/x_e7", |b| b.iter(|| cov.syzygy_residue()));
    g.finish();
}

fn local(c: &mut Criterion) {
    let mut g = c.benchmark_group("localtest");
    g.sample_size(10);
    let f = curve("C5");
    for p in [2u64, 3, 7] {
        g.bench_with_input(BenchmarkId::new("C5", p), &p, |b, &p| b.iter(|| local_test(&f, p, 30).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, covariants, local);
criterion_main!(benches);
