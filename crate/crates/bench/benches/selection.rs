use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use whittaker_bench::noisy_sine;
use whittaker_core::{select, spectral_entropy, HatMethod, LambdaGrid, Method};

fn entropy(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_entropy");
    // Both powers of two and a prime length, which takes rustfft's slow path.
    for n in [1_024usize, 1_000, 65_536, 65_537] {
        let x = noisy_sine(n).y().to_vec();
        group.bench_with_input(BenchmarkId::from_parameter(n), &x, |b, x| {
            b.iter(|| spectral_entropy(black_box(x)).unwrap())
        });
    }
    group.finish();
}

fn selectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("select");
    group.sample_size(10);
    let grid = LambdaGrid::default();
    for n in [1_000usize, 10_000] {
        let s = noisy_sine(n);
        for method in Method::ALL {
            group.bench_with_input(BenchmarkId::new(method.as_str(), n), &s, |b, s| {
                b.iter(|| select(black_box(s), &grid, 2, method, HatMethod::Auto).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, entropy, selectors);
criterion_main!(benches);
