use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nowhere_bench::sample_points;
use nowhere_core::cells::{cell, locate};
use nowhere_core::rat::int;
use nowhere_core::{antiderivative_term, darboux_gap, enclose_integral, eval_f, Address};

fn evaluation(c: &mut Criterion) {
    let xs = sample_points();
    let mut g = c.benchmark_group("eval_f");
    for terms in [10usize, 30, 60] {
        g.bench_with_input(BenchmarkId::from_parameter(terms), &terms, |b, &terms| {
            b.iter(|| xs.iter().map(|x| eval_f(black_box(x), terms).unwrap()).collect::<Vec<_>>())
        });
    }
    g.finish();

    c.bench_function("antiderivative_term/k=8", |b| {
        b.iter(|| xs.iter().map(|x| antiderivative_term(black_box(x), 8).unwrap()).collect::<Vec<_>>())
    });
}

fn cells(c: &mut Criterion) {
    let addr = Address::from_indices(&[3, -7, 12, 0, -1, 40]).unwrap();
    c.bench_function("cell/level=6", |b| b.iter(|| cell(black_box(&addr))));
    let xs = sample_points();
    c.bench_function("locate/k=12", |b| b.iter(|| xs.iter().map(|x| locate(black_box(x), 12).unwrap()).collect::<Vec<_>>()));
}

fn integration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enclose_integral");
    for budget in [50u64, 5_000, 500_000] {
        g.bench_with_input(BenchmarkId::from_parameter(budget), &budget, |b, &budget| {
            b.iter(|| enclose_integral(6, black_box(&int(0)), budget).unwrap())
        });
    }
    g.finish();
    c.bench_function("darboux_gap/K=10,budget=60", |b| b.iter(|| darboux_gap(black_box(10), 60)));
}

criterion_group!(benches, evaluation, cells, integration);
criterion_main!(benches);
