use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use seqlearn_core::experiments::{self, SimConfig};
use seqlearn_core::netgen::{self, LpsParams};
use seqlearn_core::{llr, oracle, spectral, DecisionRule, Precision};

fn graphs(c: &mut Criterion) {
    let rr = netgen::random_regular(2000, 3, 1).unwrap();
    c.bench_function("random_regular 2000x3", |b| b.iter(|| netgen::random_regular(black_box(2000), 3, 1).unwrap()));
    c.bench_function("girth rr 2000x3", |b| b.iter(|| black_box(&rr).girth()));
    c.bench_function("lps(5,13)", |b| b.iter(|| netgen::lps(LpsParams::new(5, 13).unwrap()).unwrap()));
    let pet = netgen::petersen();
    c.bench_function("search_certificate petersen", |b| b.iter(|| llr::search_certificate(black_box(&pet), 0, 1).unwrap()));
}

fn spectra(c: &mut Criterion) {
    let dense = netgen::random_regular(400, 4, 2).unwrap();
    let sparse = netgen::lps(LpsParams::new(5, 13).unwrap()).unwrap();
    let mut group = c.benchmark_group("spectral");
    group.sample_size(10);
    group.bench_function("dense rr 400x4", |b| b.iter(|| spectral::top_two_eigenvalues(&dense, 1e-8).unwrap()));
    group.bench_function("lanczos lps(5,13)", |b| b.iter(|| spectral::top_two_iterative(&sparse, 1e-8).unwrap()));
    group.finish();
}

fn learning(c: &mut Criterion) {
    let p: Precision = "7/10".parse().unwrap();
    let k10 = netgen::clique(10).unwrap();
    let cfg = SimConfig { rule: DecisionRule::Cascade, p, trials: 10_000, master_seed: 1 };
    let mut group = c.benchmark_group("learning");
    group.sample_size(10);
    group.bench_function("cascade K10 1e4 trials", |b| b.iter(|| experiments::estimate_learning(&k10, &cfg).unwrap()));
    let c6 = netgen::cycle(6).unwrap();
    let cel = netgen::celebrity(4, 2).unwrap().graph;
    group.bench_function("exact_oracle C6", |b| b.iter(|| oracle::exact_oracle(&c6, p).unwrap()));
    group.bench_function("exact_oracle celebrity(4,2)", |b| b.iter(|| oracle::exact_oracle(&cel, p).unwrap()));
    group.finish();
}

criterion_group!(benches, graphs, spectra, learning);
criterion_main!(benches);
