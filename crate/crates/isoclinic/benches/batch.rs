//! Parallel against sequential execution of the sampled batch checks.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use isoclinic::par::Exec;
use isoclinic::verify;
use std::hint::black_box;

fn batches(c: &mut Criterion) {
    let mut group = c.benchmark_group("batch");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        let label = format!("{exec:?}");
        group.bench_with_input(BenchmarkId::new("slope_agreement_a1", &label), &exec, |b, &e| {
            b.iter(|| black_box(verify::slope_agreement(&["A1"], 24, 1, e)))
        });
        group.bench_with_input(BenchmarkId::new("ktype_structure", &label), &exec, |b, &e| {
            b.iter(|| black_box(verify::ktype_structure(10, 1, e)))
        });
        group.bench_with_input(BenchmarkId::new("structural_invariants", &label), &exec, |b, &e| {
            b.iter(|| black_box(verify::structural_invariants(&verify::SUPPORTED, e)))
        });
    }
    group.finish();
}

criterion_group!(benches, batches);
criterion_main!(benches);
