use ampsep_core::estimation::{amp_est_distribution, phase_estimation_distribution};
use ampsep_core::weight::build_wdp_algorithm;
use ampsep_core::{amplify, derive_params, separate, BooleanFunction, EstimationMode, QueryLedger};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn bench_amplify(c: &mut Criterion) {
    let mut group = c.benchmark_group("amplify");
    for n in [6u32, 10, 14] {
        let alg = build_wdp_algorithm(BooleanFunction::with_weight(n, 3, 1).unwrap()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| amplify(&alg, black_box(4), &mut QueryLedger::new()))
        });
    }
    group.finish();
}

fn bench_distribution(c: &mut Criterion) {
    let mut group = c.benchmark_group("outcome_distribution");
    for m in [6u32, 10, 14] {
        group.bench_with_input(BenchmarkId::new("closed_form", m), &m, |b, &m| {
            b.iter(|| amp_est_distribution(black_box(0.4), m).unwrap())
        });
    }
    let alg = build_wdp_algorithm(BooleanFunction::with_weight(3, 3, 1).unwrap()).unwrap();
    for m in [4u32, 6] {
        group.bench_with_input(BenchmarkId::new("circuit", m), &m, |b, &m| {
            b.iter(|| phase_estimation_distribution(&alg, m).unwrap())
        });
    }
    group.finish();
}

fn bench_separate(c: &mut Criterion) {
    let mut group = c.benchmark_group("separate");
    for n in [8u32, 12, 16] {
        let f = BooleanFunction::with_weight(n, 4, 2).unwrap();
        let size = f.domain_size() as f64;
        let config = derive_params(8.0 / size, 4.0 / size, 0.05).unwrap();
        let alg = build_wdp_algorithm(f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| separate(&alg, &config, EstimationMode::Distribution, &mut rng).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_amplify, bench_distribution, bench_separate);
criterion_main!(benches);
