use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use mckay_core::counting;
use mckay_core::levi_min::LeviKernels;
use mckay_core::{GroupSpec, Series, Twist};

fn counts(c: &mut Criterion) {
    let e7 = GroupSpec::sc(Series::E7, 7, Twist::Split).unwrap();
    let d8 = GroupSpec::sc(Series::D, 8, Twist::Split).unwrap();
    let a5 = GroupSpec::adjoint(Series::A, 5, Twist::NonSplit).unwrap();
    c.bench_function("classes E7 sc", |b| b.iter(|| counting::semisimple_class_count(black_box(&e7)).unwrap()));
    c.bench_function("ss chars ^-A5 adjoint", |b| b.iter(|| counting::semisimple_char_count(black_box(&a5)).unwrap()));
    c.bench_function("borel direct D8 sc", |b| b.iter(|| counting::borel_pprime_count(black_box(&d8)).unwrap()));
    c.bench_function("borel lattice D8 sc", |b| b.iter(|| counting::borel_pprime_lattice(black_box(&d8)).unwrap()));
    c.bench_function("mckay verify D8 sc", |b| b.iter(|| counting::mckay_verify(black_box(&d8)).unwrap()));
}

fn kernels(c: &mut Criterion) {
    c.bench_function("levi kernels E8", |b| b.iter(|| LeviKernels::compute(Series::E8, black_box(8)).unwrap()));
    c.bench_function("levi kernels D12", |b| b.iter(|| LeviKernels::compute(Series::D, black_box(12)).unwrap()));
}

fn grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid");
    group.sample_size(10);
    group.bench_function("mckay verify up to rank 6", |b| {
        b.iter(|| {
            for spec in counting::spec_grid(black_box(6)) {
                counting::mckay_verify(&spec).unwrap();
            }
        })
    });
    group.finish();
}

criterion_group!(benches, counts, kernels, grid);
criterion_main!(benches);
