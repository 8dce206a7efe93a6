use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hessmap::{
    approximant, build_curve, closed_form_arc_hessenberg, default_nodes_per_segment,
    discretize_measure, hessenberg_arnoldi, hessenberg_from_moments, moment_matrix,
    moment_matrix_extended, sup_difference, theta_norms, DiagonalLimits, DiscretizedMeasure,
    CurveDescriptor, ReferenceMap,
};

fn cross_measure(n: usize) -> DiscretizedMeasure {
    let curve = build_curve(&CurveDescriptor::Cross { a: 1.0, b: 1.0 }).unwrap();
    discretize_measure(&curve, default_nodes_per_segment(n)).unwrap()
}

fn arnoldi(c: &mut Criterion) {
    let mut group = c.benchmark_group("arnoldi");
    for n in [20, 40, 97] {
        let measure = cross_measure(n);
        group.bench_with_input(BenchmarkId::new("cross", n), &measure, |b, m| {
            b.iter(|| hessenberg_arnoldi(black_box(m), n).unwrap())
        });
    }
    group.finish();
}

fn moments(c: &mut Criterion) {
    let mut group = c.benchmark_group("moments");
    let n = 12;
    let measure = cross_measure(n);
    group.bench_function("double", |b| {
        b.iter(|| {
            let m = moment_matrix(black_box(&measure), n + 1).unwrap();
            hessenberg_from_moments(&m, n, None).unwrap()
        })
    });
    group.bench_function("extended_40", |b| {
        b.iter(|| {
            let m = moment_matrix_extended(black_box(&measure), n + 1, 40).unwrap();
            hessenberg_from_moments(&m, n, Some(40)).unwrap()
        })
    });
    group.finish();
}

fn arc(c: &mut Criterion) {
    let a = 2.0;
    let reference = ReferenceMap::Arc { a };
    let d = closed_form_arc_hessenberg(a, 60).unwrap();
    let limits = DiagonalLimits::analytic(reference.clone(), 8 * 60).unwrap();

    c.bench_function("arc/closed_form_60", |b| {
        b.iter(|| closed_form_arc_hessenberg(black_box(a), 60).unwrap())
    });
    c.bench_function("arc/theta_norms_60", |b| {
        b.iter(|| theta_norms(black_box(&d), &limits).unwrap())
    });
    let h = approximant(&d, 38).unwrap();
    c.bench_function("arc/sup_difference_h38", |b| {
        b.iter(|| sup_difference(black_box(&h), &reference, 1.0, 4096).unwrap())
    });
}

criterion_group!(
    name = benches;
    config = Criterion::default().warm_up_time(Duration::from_millis(500)).sample_size(20);
    targets = arnoldi, moments, arc,
);
criterion_main!(benches);
