use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use uniformize_core::dynamics::IntegratorConfig;
use uniformize_core::io::{parse_family_config, FamilyConfig, RATIONAL_EXAMPLE};
use uniformize_core::nuttall::{classify_sheets, critical_points, GridSpec, NuttallContext};
use uniformize_core::rational::solve_rational_family;
use uniformize_core::torus::{solve_torus_family, torus_critical_values, torus_example_spec};

fn families(c: &mut Criterion) {
    let FamilyConfig::Rational(rational) = parse_family_config(RATIONAL_EXAMPLE).unwrap() else {
        unreachable!()
    };
    let torus = torus_example_spec().unwrap();
    let cfg = IntegratorConfig::default();

    c.bench_function("rational_solve", |b| b.iter(|| solve_rational_family(black_box(&rational), &cfg, &[]).unwrap()));
    c.bench_function("torus_solve", |b| b.iter(|| solve_torus_family(black_box(&torus), &cfg, &[]).unwrap()));
    c.bench_function("torus_critical_values", |b| {
        b.iter(|| torus_critical_values(black_box(&torus.initial), 1e-12).unwrap())
    });
}

fn nuttall(c: &mut Criterion) {
    let ctx = NuttallContext::real(0.6).unwrap();
    let mut group = c.benchmark_group("nuttall");
    group.sample_size(10);
    group.bench_function("classify_sheets_200", |b| {
        b.iter(|| classify_sheets(black_box(&ctx), &GridSpec::standard(200)).unwrap())
    });
    group.bench_function("critical_points", |b| b.iter(|| critical_points(black_box(0.6), &ctx).unwrap()));
    group.finish();
}

criterion_group!(benches, families, nuttall);
criterion_main!(benches);
