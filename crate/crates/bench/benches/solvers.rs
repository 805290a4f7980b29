use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ksat_bench::{planted, random};
use ksat_core::analysis::good_variables;
use ksat_core::oracle::count_solutions;
use ksat_core::solvers::{ppz_repeat, uniform_sampling_solver, PpzOptions, PpzPlan};
use ksat_core::RandomStream;
use std::hint::black_box;

fn ppz_single_run(c: &mut Criterion) {
    let mut group = c.benchmark_group("ppz_run");
    for &(n, k, m) in &[(50, 3, 200), (200, 4, 2000), (1000, 5, 20000)] {
        let inst = planted(n, k, m, 1);
        let plan = PpzPlan::new(&inst.formula).unwrap();
        let mut state = plan.new_state();
        let mut rng = RandomStream::new(2, 0).rng();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{n}-{k}-{m}")),
            &plan,
            |b, plan| b.iter(|| black_box(plan.run(&mut state, &mut rng, PpzOptions::default()))),
        );
    }
    group.finish();
}

fn repeated_solvers(c: &mut Criterion) {
    let inst = planted(20, 3, 80, 3);
    c.bench_function("ppz_repeat/20-3-80", |b| {
        b.iter(|| black_box(ppz_repeat(&inst.formula, 1 << 16, &RandomStream::new(4, 0)).unwrap()))
    });
    let f = random(14, 3, 28, 5);
    c.bench_function("sampling/14-3-28", |b| {
        b.iter(|| {
            black_box(uniform_sampling_solver(&f, 1 << 12, &RandomStream::new(6, 0)).unwrap())
        })
    });
}

fn oracle_count(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_solutions");
    group.sample_size(10);
    for &n in &[12, 16, 20] {
        let f = random(n, 3, 3 * n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &f, |b, f| {
            b.iter(|| black_box(count_solutions(f).unwrap()))
        });
    }
    group.finish();
}

fn good_variable_scan(c: &mut Criterion) {
    let inst = planted(10_000, 6, 443_615, 8);
    c.bench_function("good_variables/10000-6", |b| {
        b.iter(|| black_box(good_variables(&inst.formula, &inst.sigma).count()))
    });
}

criterion_group!(
    benches,
    ppz_single_run,
    repeated_solvers,
    oracle_count,
    good_variable_scan
);
criterion_main!(benches);
