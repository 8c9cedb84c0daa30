use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use itmlab::lyapunov::{spectrum, top_exponent};
use itmlab::{Family, SamplingSpec};

fn estimators(c: &mut Criterion) {
    let spec = SamplingSpec::geometric(0.5, 20, 7);
    let mut g = c.benchmark_group("lyapunov");
    g.sample_size(10);
    for d in [3, 4, 6] {
        g.bench_with_input(BenchmarkId::new("spectrum, 10^4 steps", d), &d, |b, &d| {
            b.iter(|| spectrum(Family::A, black_box(&spec), d, 10_000, 1))
        });
        g.bench_with_input(BenchmarkId::new("top, 10^4 steps", d), &d, |b, &d| {
            b.iter(|| top_exponent(Family::A, black_box(&spec), d, 10_000, 1))
        });
    }
    g.bench_function("spectrum, d = 4, 8 samples", |b| b.iter(|| spectrum(Family::A, black_box(&spec), 4, 5_000, 8)));
    g.finish();
}

criterion_group!(benches, estimators);
criterion_main!(benches);
