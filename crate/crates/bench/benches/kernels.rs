use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use xxz_bench::fixture;
use xxz_core::bethe::bethe_state;
use xxz_core::model::transfer_matrix;
use xxz_core::solver::{solve_all, spectrum_ed};
use xxz_core::Complex64;

fn transfer(c: &mut Criterion) {
    let mut g = c.benchmark_group("transfer_matrix");
    let u = Complex64::new(0.21, 0.13);
    for n in [2, 4, 6, 8] {
        let p = fixture(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| {
            b.iter(|| transfer_matrix(black_box(u), p).unwrap())
        });
    }
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum_ed");
    g.sample_size(10);
    for n in [2, 4, 6] {
        let p = fixture(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| b.iter(|| spectrum_ed(p).unwrap()));
    }
    g.finish();
}

fn solve(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_all");
    g.sample_size(10);
    for n in [2, 3, 4] {
        let p = fixture(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &p, |b, p| b.iter(|| solve_all(p).unwrap()));
    }
    g.finish();
}

fn state(c: &mut Criterion) {
    let mut g = c.benchmark_group("bethe_state");
    for n in [2, 3, 4] {
        let p = fixture(n);
        let outcome = solve_all(&p).unwrap();
        let tq = outcome.solutions()[0].clone();
        g.bench_with_input(BenchmarkId::from_parameter(n), &(p, tq), |b, (p, tq)| {
            b.iter(|| bethe_state(tq, p).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, transfer, spectrum, solve, state);
criterion_main!(benches);
