//! Benchmarks of the metric hot paths: density construction, the density
//! distance itself, KDE evaluation, and ROC/ABROCA on large score sets.

use criterion::{criterion_group, criterion_main, Criterion};
use fairdist::abroca::{abroca, roc_curve};
use fairdist::density::{density_vector, DensityVector, ProbabilityStep};
use fairdist::madd::madd;
use fairdist::smoothing::{kde, scott_bandwidth};
use fairdist::tabular::{stratified_split, Dataset};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() as f64) / (u64::MAX as f64)
}

fn random_probs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| uniform(&mut rng)).collect()
}

fn random_density(seed: u64, step: ProbabilityStep) -> DensityVector {
    density_vector(&random_probs(5_000, seed), step).unwrap()
}

fn bench_density(c: &mut Criterion) {
    let step = ProbabilityStep::new(0.01).unwrap();
    let probs = random_probs(10_000, 1);
    c.bench_function("density_vector_10k_e001", |b| {
        b.iter(|| density_vector(black_box(&probs), step).unwrap())
    });
}

fn bench_madd(c: &mut Criterion) {
    let step = ProbabilityStep::new(0.01).unwrap();
    let d0 = random_density(2, step);
    let d1 = random_density(3, step);
    c.bench_function("madd_m101", |b| {
        b.iter(|| madd(black_box(&d0), black_box(&d1)).unwrap())
    });
}

fn bench_kde(c: &mut Criterion) {
    let samples = random_probs(5_000, 4);
    let bandwidth = scott_bandwidth(&samples).unwrap();
    c.bench_function("kde_5k_samples_512_grid", |b| {
        b.iter(|| kde(black_box(&samples), bandwidth, 512).unwrap())
    });
}

fn bench_abroca(c: &mut Criterion) {
    let scores0 = random_probs(10_000, 5);
    let scores1 = random_probs(10_000, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let labels: Vec<bool> = (0..10_000).map(|_| rng.next_u32() % 2 == 0).collect();
    c.bench_function("roc_and_abroca_10k", |b| {
        b.iter(|| {
            let c0 = roc_curve(black_box(&scores0), &labels).unwrap();
            let c1 = roc_curve(black_box(&scores1), &labels).unwrap();
            abroca(&c0, &c1).unwrap()
        })
    });
}

fn bench_split(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 20_000;
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..8).map(|_| uniform(&mut rng)).collect())
        .collect();
    let y: Vec<bool> = (0..n).map(|i| i % 10 < 7).collect();
    let dataset = Dataset::from_parts(
        "bench".into(),
        (0..8).map(|i| format!("f{i}")).collect(),
        vec![],
        x,
        y,
    )
    .unwrap();
    c.bench_function("stratified_split_20k", |b| {
        b.iter(|| stratified_split(black_box(&dataset), 0.7, 42).unwrap())
    });
}

criterion_group!(
    benches,
    bench_density,
    bench_madd,
    bench_kde,
    bench_abroca,
    bench_split
);
criterion_main!(benches);
