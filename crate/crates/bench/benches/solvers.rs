use criterion::{criterion_group, criterion_main, Criterion};

use chebk_core::first_kind::solve_first_kind;
use chebk_core::second_kind::{build_j, solve_second_kind};
use chebk_core::{ChebPoly, IntervalUnion, RationalWeight, UnitWeight};

fn k1() -> IntervalUnion {
    IntervalUnion::new(&[(-1.0, -0.5), (-0.2, 0.2), (0.5, 1.0)]).unwrap()
}

fn bench_first_kind(c: &mut Criterion) {
    let k = k1();
    let w = chebk_core::weight::example_weight(&k);
    c.bench_function("first_kind_k1_weighted_n5", |b| {
        b.iter(|| solve_first_kind(&k, &w, 5).unwrap().t_value)
    });
    let unit = IntervalUnion::segment(-1.0, 1.0).unwrap();
    let one = RationalWeight::one();
    c.bench_function("first_kind_unit_n10", |b| {
        b.iter(|| solve_first_kind(&unit, &one, 10).unwrap().t_value)
    });
}

fn bench_second_kind(c: &mut Criterion) {
    let k = k1();
    c.bench_function("second_kind_k1_n5_d20", |b| {
        b.iter(|| solve_second_kind(&k, &UnitWeight, 5, 20).unwrap().ersatz_value)
    });
}

fn bench_j_matrix(c: &mut Criterion) {
    let k = k1();
    let w = chebk_core::weight::example_weight(&k);
    let _ = k;
    c.bench_function("build_j_weighted_d40", |b| {
        b.iter(|| build_j(-1.0, -0.5, 40, 5, &w).unwrap()[(40, 5)])
    });
}

fn bench_rootfinding(c: &mut Criterion) {
    let coeffs: Vec<f64> = (0..=20).map(|k| ((k * k + 1) as f64).sin()).collect();
    let p = ChebPoly::t(coeffs);
    c.bench_function("colleague_roots_deg20", |b| b.iter(|| p.roots().unwrap().len()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = bench_first_kind, bench_second_kind, bench_j_matrix, bench_rootfinding
}
criterion_main!(benches);
