//! Parallel-vs-sequential comparison of the data-parallel hot paths:
//! width-table rows and randomized verification trial batches, run through
//! `exec::par_map` and `exec::seq_map` over identical workloads.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use cvdw::exec::{par_map, seq_map};
use cvdw::extremal::{comparison_search, ClassConfig};
use cvdw::widths::{width_value, QSpec};

fn width_rows(c: &mut Criterion) {
    let jobs: Vec<(ClassConfig, u32)> = {
        let mut v = Vec::new();
        for r in 1..=2u32 {
            for n in 1..=6u32 {
                v.push((ClassConfig::sobolev(r).unwrap(), n));
                v.push((ClassConfig::hardy(r, 1.0).unwrap(), n));
            }
        }
        v
    };
    let work = |(cfg, n): (ClassConfig, u32)| -> f64 {
        width_value(&cfg, n, QSpec::Infinity, 1024).unwrap().value
    };
    let mut group = c.benchmark_group("width_rows");
    group.sample_size(10);
    group.bench_function("par", |b| {
        b.iter(|| black_box(par_map(jobs.clone(), work)))
    });
    group.bench_function("seq", |b| {
        b.iter(|| black_box(seq_map(jobs.clone(), work)))
    });
    group.finish();
}

fn comparison_trials(c: &mut Criterion) {
    let cfgs: Vec<(ClassConfig, u64)> = (0..8u64)
        .map(|s| (ClassConfig::achieser(1, 1.0).unwrap(), s))
        .collect();
    // Each item runs a short comparison suite; the suite itself also
    // parallelizes internally, so the `seq` variant isolates the outer map.
    let work = |(cfg, seed): (ClassConfig, u64)| -> f64 {
        comparison_search(&cfg, 2, 4, seed, 1024)
            .unwrap()
            .worst_margin
    };
    let mut group = c.benchmark_group("comparison_trials");
    group.sample_size(10);
    group.bench_function("par", |b| {
        b.iter(|| black_box(par_map(cfgs.clone(), work)))
    });
    group.bench_function("seq", |b| {
        b.iter(|| black_box(seq_map(cfgs.clone(), work)))
    });
    group.finish();
}

criterion_group!(benches, width_rows, comparison_trials);
criterion_main!(benches);
