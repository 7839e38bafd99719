use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cogrowth::counting::{gamma_bruteforce_with, gamma_dp_with, walk_counts_with};
use cogrowth::{preset, Strategy};

const BALL: usize = 2_000_000;

fn dp(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_dp");
    group.sample_size(10);
    for (name, n) in [("zsquared", 24), ("sl2z", 20), ("s3", 40)] {
        let g = preset(name).unwrap();
        for s in Strategy::available() {
            group.bench_with_input(BenchmarkId::new(s.name(), format!("{name}/{n}")), &n, |b, &n| {
                b.iter(|| gamma_dp_with(black_box(&g), n, BALL, s).unwrap())
            });
        }
    }
    group.finish();

    let mut group = c.benchmark_group("walk_counts");
    group.sample_size(10);
    for (name, n) in [("zsquared", 24), ("sl2z", 20)] {
        let g = preset(name).unwrap();
        for s in Strategy::available() {
            group.bench_with_input(BenchmarkId::new(s.name(), format!("{name}/{n}")), &n, |b, &n| {
                b.iter(|| walk_counts_with(black_box(&g), n, BALL, s).unwrap())
            });
        }
    }
    group.finish();
}

fn bruteforce(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_bruteforce");
    group.sample_size(10);
    for (name, n) in [("z2xz2", 10), ("sl2z", 10)] {
        let g = preset(name).unwrap();
        for s in Strategy::available() {
            group.bench_with_input(BenchmarkId::new(s.name(), format!("{name}/{n}")), &n, |b, &n| {
                b.iter(|| gamma_bruteforce_with(black_box(&g), n, u64::MAX, s).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, dp, bruteforce);
criterion_main!(benches);
