//! Criterion benchmarks for the hot paths of the engine: presentation
//! realization, cohomology, mapping-torus synthesis, Property B and
//! minimal-model construction.

use cokahler::graded::tensor_product;
use cokahler::sullivan::minimal_model_of_formal;
use cokahler_bench::{cpn, kodaira_thurston, torus, trivial_mapping_torus};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn bench_build(c: &mut Criterion) {
    c.bench_function("build T^6 from presentation", |b| {
        b.iter(|| black_box(torus(6)))
    });
    c.bench_function("build CP^4 from presentation", |b| {
        b.iter(|| black_box(cpn(4)))
    });
}

fn bench_cohomology(c: &mut Criterion) {
    let kt = kodaira_thurston();
    c.bench_function("cohomology of Kodaira-Thurston", |b| {
        b.iter(|| black_box(cokahler::cohomology(&kt.cdga).unwrap()))
    });
}

fn bench_mapping_torus(c: &mut Criterion) {
    let k = tensor_product(&torus(2), &cpn(2), None);
    c.bench_function("mapping torus over T^2 x CP^2", |b| {
        b.iter(|| black_box(trivial_mapping_torus(&k)))
    });
}

fn bench_property_b(c: &mut Criterion) {
    let h = torus(4);
    c.bench_function("Property B on T^4", |b| {
        b.iter(|| black_box(cokahler::property_b_check(&h).unwrap()))
    });
}

fn bench_minimal_model(c: &mut Criterion) {
    let model = trivial_mapping_torus(&cpn(2));
    c.bench_function("minimal model of the CP^2 mapping torus", |b| {
        b.iter(|| black_box(minimal_model_of_formal(&model.algebra, 6).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_build,
    bench_cohomology,
    bench_mapping_torus,
    bench_property_b,
    bench_minimal_model
);
criterion_main!(benches);
