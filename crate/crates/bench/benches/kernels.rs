use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use escape_lab_core::curvature::ricci_at;
use escape_lab_core::geodesic::{
    half_oscillation, minimal_loop, minimal_loop_on_profile, RevolutionProfile, SearchParams,
};
use escape_lab_core::grid::grid_oracle;
use escape_lab_core::warp::{eval_jet2, ManifoldSpec, WarpingFunction};

fn poly_spec() -> ManifoldSpec {
    ManifoldSpec::new(
        3,
        WarpingFunction::LinearCone,
        WarpingFunction::poly_decay(1.0).unwrap(),
    )
    .unwrap()
}

fn bench_jets(c: &mut Criterion) {
    let w = WarpingFunction::poly_decay(1.0).unwrap();
    c.bench_function("jet poly_decay", |b| {
        b.iter(|| eval_jet2(black_box(&w), black_box(17.3)).unwrap())
    });
    let custom = WarpingFunction::custom("(1 + r^2)^(-0.75)").unwrap();
    c.bench_function("jet custom expr", |b| {
        b.iter(|| eval_jet2(black_box(&custom), black_box(17.3)).unwrap())
    });
}

fn bench_ricci(c: &mut Criterion) {
    let spec = poly_spec();
    c.bench_function("ricci_at", |b| {
        b.iter(|| ricci_at(black_box(&spec), black_box(3.7)).unwrap())
    });
}

fn bench_arcs(c: &mut Criterion) {
    let profile = RevolutionProfile::from_spec(&poly_spec()).unwrap();
    c.bench_function("half_oscillation b=0.5", |b| {
        b.iter(|| half_oscillation(black_box(&profile), black_box(0.5)).unwrap())
    });
}

fn bench_minimal_loop(c: &mut Criterion) {
    let spec = poly_spec();
    let params = SearchParams::default();
    let mut g = c.benchmark_group("minimal_loop");
    g.sample_size(10);
    g.bench_function("poly l=100", |b| {
        b.iter(|| minimal_loop(black_box(&spec), black_box(100), &params).unwrap())
    });
    let log_profile = RevolutionProfile::new(WarpingFunction::log_decay(1.0).unwrap(), 1.0).unwrap();
    g.bench_function("log l=100000", |b| {
        b.iter(|| minimal_loop_on_profile(black_box(&log_profile), black_box(100_000), &params).unwrap())
    });
    g.finish();
}

fn bench_grid(c: &mut Criterion) {
    let profile = RevolutionProfile::from_spec(&poly_spec()).unwrap();
    let mut g = c.benchmark_group("grid_oracle");
    g.sample_size(10);
    g.bench_function("poly l=10 512x512", |b| {
        b.iter(|| grid_oracle(black_box(&profile), 10, 7.0, 512, 512).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_jets, bench_ricci, bench_arcs, bench_minimal_loop, bench_grid);
criterion_main!(benches);
