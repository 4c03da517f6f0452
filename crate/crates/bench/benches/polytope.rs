use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use latpoly::canonical::normal_form;
use latpoly::hodge::hodge_numbers;
use latpoly::nef::{enumerate_nef_partitions, NefOptions};
use latpoly::polytope::complete_points;
use latpoly_bench::{pair, WEIGHTS};

fn completion(c: &mut Criterion) {
    let mut g = c.benchmark_group("completion");
    for w in WEIGHTS {
        let (m, mf, _, _) = pair(w);
        g.bench_with_input(BenchmarkId::from_parameter(m.np()), &(m, mf), |b, (m, mf)| {
            b.iter(|| complete_points(black_box(m), mf).unwrap())
        });
    }
    g.finish();
}

fn normal_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("normal_form");
    for w in WEIGHTS {
        let (_, _, n, nf) = pair(w);
        g.bench_with_input(BenchmarkId::from_parameter(w), &(n, nf), |b, (n, nf)| {
            b.iter(|| normal_form(black_box(n), nf).unwrap())
        });
    }
    g.finish();
}

fn hodge(c: &mut Criterion) {
    let (m, mf, n, nf) = pair("84 1 1 12 28 42");
    c.bench_function("hodge_numbers", |b| b.iter(|| hodge_numbers((&m, &mf), (&n, &nf)).unwrap()));
}

fn nef(c: &mut Criterion) {
    let (_, _, n, nf) = pair(WEIGHTS[2]);
    let opts = NefOptions { r: 2, keep_symmetric: false };
    c.bench_function("nef_partitions", |b| b.iter(|| enumerate_nef_partitions(black_box(&n), &nf, opts).unwrap()));
}

criterion_group!(benches, completion, normal_forms, hodge, nef);
criterion_main!(benches);
