use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use gaussent::harness::{run_ensemble, run_trial, EnsembleConfig};
use gaussent::profiles::ProfileSpec;
use gaussent::symplectic::{eta_embed, fiducial_covariance, reduce_covariance, rotate_covariance, symplectic_spectrum};
use gaussent::{sample_haar_unitary, SeededStream};
use gaussent_bench::{peaked, ramp};

fn haar(c: &mut Criterion) {
    let mut g = c.benchmark_group("haar_unitary");
    for n in [8, 32, 128] {
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let mut rng = SeededStream::new(1, 0).rng();
            b.iter(|| black_box(sample_haar_unitary(n, &mut rng)));
        });
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("symplectic_spectrum");
    for (n, k) in [(16, 1), (16, 8), (64, 32)] {
        let z = ramp(n, 3.0);
        let o = eta_embed(&sample_haar_unitary(n, &mut SeededStream::new(2, 0).rng())).unwrap();
        let m = reduce_covariance(&rotate_covariance(&fiducial_covariance(&z), &o).unwrap(), k).unwrap();
        g.bench_function(format!("n{n}_k{k}"), |b| b.iter(|| black_box(symplectic_spectrum(&m).unwrap())));
    }
    g.finish();
}

fn trial(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_trial");
    for n in [16, 64, 128] {
        let z = peaked(n, 2.0);
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            let mut i = 0u64;
            b.iter(|| {
                i += 1;
                black_box(run_trial(&z, 1, SeededStream::new(3, i)).unwrap())
            });
        });
    }
    g.finish();
}

fn ensemble(c: &mut Criterion) {
    let mut g = c.benchmark_group("ensemble");
    g.sample_size(10);
    g.bench_function("micro_n16_k4_200", |b| {
        let cfg = EnsembleConfig {
            profile: ProfileSpec::Microcanonical { energy: 48.0, n: 16 },
            k: 4,
            samples: 200,
            seed: 4,
            workers: 1,
        };
        b.iter(|| black_box(run_ensemble(&cfg).unwrap().summary));
    });
    g.finish();
}

criterion_group!(benches, haar, spectrum, trial, ensemble);
criterion_main!(benches);
