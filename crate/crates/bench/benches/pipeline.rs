use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use exzero::cochains::{cuspidal_basis, hecke_operator};
use exzero::harness::{verify, VerifyOptions};
use exzero::integrals::{period, teitelbaum_unit, PeriodMode};
use exzero::quotient::build_quotient;
use exzero_bench::{fixture, pipeline};

fn quotient(c: &mut Criterion) {
    let m = fixture("f3-a").level();
    c.bench_function("build_quotient_f3a", |x| {
        x.iter(|| build_quotient(black_box(&m), 5).unwrap())
    });
    let g = Arc::new(build_quotient(&m, 5).unwrap());
    c.bench_function("cuspidal_basis_f3a", |x| {
        x.iter(|| cuspidal_basis(g.clone()).unwrap())
    });
    let q3 = exzero::algebra::parse_poly("T^3 + 2*T + 1", 3).unwrap();
    c.bench_function("hecke_deg3_f3a", |x| {
        x.iter(|| hecke_operator(&g, black_box(&q3)).unwrap())
    });
}

fn integrals(c: &mut Criterion) {
    let p = pipeline("f2-a");
    let mut group = c.benchmark_group("teitelbaum_unit_f2a");
    group.sample_size(10);
    for level in [6u32, 9, 12] {
        group.bench_function(format!("L{level}"), |x| {
            x.iter(|| teitelbaum_unit(&p.ctx, level, 32).unwrap())
        });
    }
    group.finish();
    let mut group = c.benchmark_group("raw_period_f2a");
    group.sample_size(10);
    group.bench_function("L4", |x| {
        x.iter(|| period(&p.ctx, 4, 32, PeriodMode::Raw, None).unwrap())
    });
    group.finish();
}

fn end_to_end(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    group.bench_function("f2-a", |x| {
        x.iter(|| verify(fixture("f2-a"), &VerifyOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, quotient, integrals, end_to_end);
criterion_main!(benches);
