use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use wronski_bench::*;
use wronski_core::criterion::{check_automorphism, CheckOptions};
use wronski_core::groebner::{elimination_basis, Budget};

fn determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("determinant");
    let nagata_j = nagata().jacobian();
    let mixed = triangular4_jacobian();
    for (name, m) in [("nagata3", &nagata_j), ("mixed4", &mixed)] {
        group.bench_with_input(BenchmarkId::new("cofactor", name), m, |b, m| {
            b.iter(|| black_box(m.determinant_cofactor().unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("bareiss", name), m, |b, m| {
            b.iter(|| black_box(m.determinant_bareiss().unwrap()))
        });
    }
    group.sample_size(10);
    let d13 = druzkowski13().jacobian();
    group.bench_function("elimination/druzkowski13", |b| b.iter(|| black_box(d13.determinant().unwrap())));
    group.finish();
}

fn reduction(c: &mut Criterion) {
    let tables = nagata_tables();
    let mut group = c.benchmark_group("wronskians_nagata");
    group.bench_function("reduced", |b| b.iter(|| black_box(wronskians(&tables, false))));
    group.bench_function("no_reduction", |b| b.iter(|| black_box(wronskians(&tables, true))));
    group.finish();
}

fn groebner(c: &mut Criterion) {
    let map = nagata();
    c.bench_function("elimination_basis/nagata", |b| {
        b.iter(|| black_box(elimination_basis(&map, &Budget::unlimited()).unwrap()))
    });
    c.bench_function("check/nagata", |b| {
        b.iter(|| black_box(check_automorphism(&map, &CheckOptions::default()).unwrap()))
    });
}

criterion_group!(benches, determinants, reduction, groebner);
criterion_main!(benches);
