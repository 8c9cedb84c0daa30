use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use itmlab::cocycles::{product, verify_column_growth};
use itmlab::galois::{charpoly, is_pinching};
use itmlab::group::derive_steinberg;
use itmlab::induction::{itinerary, params_from_itinerary};
use itmlab::sadic::tower_heights;
use itmlab::Family;
use itmlab_bench::itinerary as sample;

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("product");
    for n in [10, 100, 1000] {
        let ks = sample(n, 1);
        g.bench_with_input(BenchmarkId::new("A_4", n), &ks, |b, ks| b.iter(|| product(Family::A, black_box(ks), 4)));
    }
    g.finish();

    let ks = sample(15, 2);
    c.bench_function("column growth, 15 steps", |b| b.iter(|| verify_column_growth(black_box(&ks))));
    c.bench_function("tower heights, 500 steps", |b| {
        let ks = sample(500, 3);
        b.iter(|| tower_heights(black_box(&ks), 500, 3))
    });

    let ks = sample(30, 4);
    let (lambda, _) = params_from_itinerary(&ks, 4, 30).unwrap();
    c.bench_function("itinerary, d = 4, 30 steps", |b| b.iter(|| itinerary(black_box(&lambda), 4, 30)));

    let m = product(Family::A, &sample(6, 5), 4).unwrap();
    c.bench_function("charpoly, d = 4", |b| b.iter(|| charpoly(black_box(&m))));
    let a3 = product(Family::A, &[3], 3).unwrap();
    c.bench_function("pinching certificate, A_3(3)", |b| b.iter(|| is_pinching(black_box(&a3))));
    c.bench_function("derive Steinberg words, d = 5", |b| b.iter(|| derive_steinberg(black_box(5))));
}

criterion_group!(benches, exact);
criterion_main!(benches);
