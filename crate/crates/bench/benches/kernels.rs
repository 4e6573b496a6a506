use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use liouville_bench::{pump_fixture, random_fixture, DIMENSIONS};
use liouville_core::{channel, lemmas, linalg, spectral, Direction};

fn superoperator(c: &mut Criterion) {
    let mut g = c.benchmark_group("superoperator");
    for d in DIMENSIONS {
        let m = random_fixture(d, 2);
        g.bench_with_input(BenchmarkId::from_parameter(d), &m, |b, m| {
            b.iter(|| black_box(m.superoperator(Direction::Forward)))
        });
    }
    g.finish();
}

fn eigenspectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigenspectrum");
    for d in DIMENSIONS {
        let s = random_fixture(d, 2).superoperator(Direction::Forward);
        let tol = spectral::default_tolerance(&s);
        g.bench_with_input(BenchmarkId::from_parameter(d), &s, |b, s| {
            b.iter(|| spectral::eigenspectrum(black_box(s), tol).unwrap())
        });
    }
    let pump = pump_fixture(12).superoperator(Direction::Forward);
    let tol = spectral::default_tolerance(&pump);
    g.bench_function("pump_12", |b| {
        b.iter(|| spectral::eigenspectrum(black_box(&pump), tol).unwrap())
    });
    g.finish();
}

fn expm(c: &mut Criterion) {
    let mut g = c.benchmark_group("expm");
    for d in DIMENSIONS {
        let s = random_fixture(d, 2).superoperator(Direction::Forward);
        g.bench_with_input(BenchmarkId::from_parameter(d), &s, |b, s| {
            b.iter(|| linalg::expm(black_box(s.matrix())))
        });
    }
    g.finish();
}

fn trotter(c: &mut Criterion) {
    let mut g = c.benchmark_group("trotter");
    for d in DIMENSIONS {
        let m = random_fixture(d, 2);
        g.bench_with_input(BenchmarkId::from_parameter(d), &m, |b, m| {
            b.iter(|| channel::trotter_channel(black_box(m), 1.0, 64, 1e-12).unwrap())
        });
    }
    g.finish();
}

fn proof_chain(c: &mut Criterion) {
    let mut g = c.benchmark_group("proof_chain");
    for d in DIMENSIONS {
        let m = random_fixture(d, 2);
        g.bench_with_input(BenchmarkId::from_parameter(d), &m, |b, m| {
            b.iter(|| lemmas::proof_chain_check(black_box(m), 1e-9).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, superoperator, eigenspectrum, expm, trotter, proof_chain);
criterion_main!(benches);
