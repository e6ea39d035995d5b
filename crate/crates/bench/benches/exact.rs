use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use gaussent::moments::{expected_f_exact, moment_inputs_from_spectrum};
use gaussent::weingarten::{gram_weingarten_oracle, partitions, weingarten};
use gaussent_bench::ramp;

fn weingarten_values(c: &mut Criterion) {
    let mut g = c.benchmark_group("weingarten");
    for p in [4, 6] {
        g.bench_function(format!("character_p{p}_n{}", p + 4), |b| {
            b.iter(|| {
                for class in partitions(p) {
                    black_box(weingarten(p + 4, &class).unwrap());
                }
            })
        });
    }
    g.bench_function("gram_oracle_p4_n8", |b| b.iter(|| black_box(gram_weingarten_oracle(8, 4).unwrap())));
    g.finish();
}

fn moments(c: &mut Criterion) {
    let mut g = c.benchmark_group("expected_f_exact");
    for n in [8, 64] {
        let mi = moment_inputs_from_spectrum(&ramp(n, 2.5), n / 4).unwrap();
        g.bench_function(format!("n{n}"), |b| b.iter(|| black_box(expected_f_exact(&mi).unwrap())));
    }
    g.finish();
}

criterion_group!(benches, weingarten_values, moments);
criterion_main!(benches);
