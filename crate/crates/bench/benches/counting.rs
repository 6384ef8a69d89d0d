use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gfe_bench::curve;
use gfe_core::solutions::point_search;
use gfe_core::zeta::{count_points, count_points_naive, jacobian_order};
use gfe_core::Fq;

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("count");
    let f = curve("C9");
    for k in 1..=3 {
        let field = Fq::new(13, k).unwrap();
        g.bench_with_input(BenchmarkId::new("gcd", k), &field, |b, field| b.iter(|| count_points(&f, field).unwrap()));
    }
    let field = Fq::new(13, 2).unwrap();
    g.bench_function("naive/2", |b| b.iter(|| count_points_naive(&f, &field).unwrap()));
    g.sample_size(10);
    g.bench_function("jacobian/C9@13", |b| b.iter(|| jacobian_order(&f, 13).unwrap()));
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    let f = curve("C1");
    for bound in [20u64, 60] {
        g.bench_with_input(BenchmarkId::new("C1", bound), &bound, |b, &n| {
            b.iter(|| point_search(&f, n, None).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, counting, search);
criterion_main!(benches);
