use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qfgrowth::decomposition::{decompose_improved, DecompositionSpec};
use qfgrowth::fourier::{acceptance_spectrum, direct_spectrum, FourierSpectrum};
use qfgrowth::forrelation::{forr, forr_dense, random_instance};
use qfgrowth::linalg::{random_unitary, IndexSpace};
use qfgrowth::models::Model;
use qfgrowth::sampling::random_spec;

fn wht(c: &mut Criterion) {
    let mut group = c.benchmark_group("wht");
    for n in [10usize, 14, 18] {
        let table: Vec<f64> = (0..1usize << n).map(|i| ((i * 2654435761) % 7) as f64 - 3.0).collect();
        group.bench_with_input(BenchmarkId::from_parameter(n), &table, |b, t| {
            b.iter(|| FourierSpectrum::from_truth_table(black_box(t)).unwrap())
        });
    }
    group.finish();
}

fn acceptance_spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("acceptance_spectrum");
    group.sample_size(10);
    for model in [Model::Bqp, Model::Dqck, Model::HalfBqp] {
        let k = if model == Model::Dqck { 1 } else { 0 };
        let space = IndexSpace::new(3, 1, k).unwrap();
        let spec = random_spec(model, space, 2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        group.bench_function(model.to_string(), |b| {
            b.iter(|| acceptance_spectrum(black_box(&spec), None).unwrap())
        });
    }
    group.finish();
}

fn direct_vs_wht(c: &mut Criterion) {
    let mut group = c.benchmark_group("dqc1_m4_d2");
    let space = IndexSpace::new(1, 0, 1).unwrap();
    let spec = random_spec(Model::Dqck, space, 2, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
    group.bench_function("wht", |b| b.iter(|| acceptance_spectrum(black_box(&spec), None).unwrap()));
    group.bench_function("direct", |b| b.iter(|| direct_spectrum(black_box(&spec), None).unwrap()));
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let space = IndexSpace::new(2, 1, 0).unwrap();
    let mats: Vec<_> = (0..4).map(|t| random_unitary(8, 10 + t).unwrap()).collect();
    let spec = DecompositionSpec::improved(space, mats, &[], 4, &[(2, 4)], &[3]).unwrap();
    c.bench_function("decompose_improved_m8_d4", |b| {
        b.iter(|| decompose_improved(black_box(&spec)).unwrap())
    });
}

fn forrelation(c: &mut Criterion) {
    let mut group = c.benchmark_group("forrelation_k3");
    for n in [4u32, 6, 8] {
        let inst = random_instance(3, n, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        group.bench_with_input(BenchmarkId::new("statevector", n), &inst, |b, i| b.iter(|| forr(black_box(i))));
        group.bench_with_input(BenchmarkId::new("dense", n), &inst, |b, i| {
            b.iter(|| forr_dense(black_box(i)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, wht, acceptance_spectra, direct_vs_wht, decomposition, forrelation);
criterion_main!(benches);
