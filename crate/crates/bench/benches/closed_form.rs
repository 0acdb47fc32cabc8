use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use tmapprox::{
    approximate, best_polynomial, min_error_closed_form, w_gram_closed_form, KernelParams,
};
use tmapprox_bench::{imaginary, tilted};

fn closed_forms(c: &mut Criterion) {
    let params = KernelParams::real(2.0, -3.0, 1.0).unwrap();
    let mut g = c.benchmark_group("closed_form");
    for n in [1usize, 4, 10] {
        let seq = tilted(n);
        g.bench_with_input(BenchmarkId::new("best_polynomial", n), &seq, |b, s| {
            b.iter(|| best_polynomial(black_box(&params), s).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("min_error", n), &seq, |b, s| {
            b.iter(|| min_error_closed_form(black_box(&params), s).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("w_gram", n), &seq, |b, s| {
            b.iter(|| w_gram_closed_form(black_box(&params), s).unwrap())
        });
        let seq = imaginary(n);
        g.bench_with_input(BenchmarkId::new("approximate", n), &seq, |b, s| {
            b.iter(|| approximate(black_box(&params), s).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, closed_forms);
criterion_main!(benches);
