use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lcontract_bench::two_chain;
use lcontract_core::complement::min_complement;
use lcontract_core::logdisc::pair_status;
use lcontract_core::{canonical_form, classify, enumerate_fibers, CyclicQuot, FiberGraph};

fn hj(c: &mut Criterion) {
    let x = CyclicQuot::new(1_000_003i64, 314_159i64).unwrap();
    c.bench_function("hj expand and contract", |b| {
        b.iter(|| black_box(&x).hj_expand().hj_contract())
    });
    c.bench_function("class T over n <= 300", |b| {
        b.iter(|| {
            let mut count = 0;
            for n in 2..=300i64 {
                for q in 1..n {
                    if let Ok(x) = CyclicQuot::new(n, q) {
                        count += usize::from(x.class_t().is_some());
                    }
                }
            }
            count
        })
    });
}

fn graphs(c: &mut Criterion) {
    let x = CyclicQuot::new(97i64, 35i64).unwrap();
    let g = two_chain(x.hj_expand().entries(), x.dual().hj_expand().entries());
    let bullet = g.bullet_ids()[0];
    c.bench_function("canonical form", |b| b.iter(|| canonical_form(black_box(&g))));
    c.bench_function("pair status", |b| b.iter(|| pair_status(black_box(&g), &[bullet]).unwrap()));
    let fiber = FiberGraph::new(g).unwrap();
    c.bench_function("classify", |b| b.iter(|| classify(black_box(&fiber)).unwrap()));
    c.bench_function("min complement", |b| b.iter(|| min_complement(black_box(&fiber), false).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for n in [5usize, 6, 7] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| enumerate_fibers(n, true).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, hj, graphs, enumeration);
criterion_main!(benches);
