use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use mdinf_bench::busy_period_setup;
use mdinf_core::mdinf::busy_period_transform;
use mdinf_core::{invert_grid, InversionPlan};

fn plan_and_grid(c: &mut Criterion) {
    let (params, spec) = busy_period_setup(1.0, 1.0, 0.1, 0.001);
    let transform = busy_period_transform(&params).unwrap();
    let ts = [1.0, 2.0, 3.0, 4.0, 5.0];

    c.bench_function("plan rho=1 dt=0.1", |b| {
        b.iter(|| InversionPlan::new(&transform, black_box(&spec)).unwrap())
    });
    let plan = InversionPlan::new(&transform, &spec).unwrap();
    c.bench_function("evaluate one point rho=1", |b| b.iter(|| plan.evaluate(black_box(2.0)).unwrap()));
    c.bench_function("invert_grid five points rho=1", |b| {
        b.iter(|| invert_grid(&transform, black_box(&ts), &spec).unwrap())
    });
}

criterion_group!(benches, plan_and_grid);
criterion_main!(benches);
