use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qlift_bench::{hermitian, hermitian_encoding, state};
use qlift_core::blockenc::{nearest_block_encoding, poly_eigen_transform, up_scale};
use qlift_core::channels::fidelity;
use qlift_core::mat::herm_eig;
use qlift_core::polyapprox::{positive_power_poly, rectangle_poly, scale_poly};
use qlift_core::primitives::{dme_error, DmeConfig};
use qlift_core::reductions::{gibbs_tester, phase_est_tester, GibbsVariant};

fn linear_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("herm_eig");
    for dim in [4, 16, 64] {
        let h = hermitian(dim, 1);
        g.bench_with_input(BenchmarkId::from_parameter(dim), &h, |b, h| b.iter(|| herm_eig(black_box(h)).unwrap()));
    }
    g.finish();
    let (r, s) = (state(8, 1), state(8, 2));
    c.bench_function("fidelity_8", |b| b.iter(|| fidelity(black_box(&r), black_box(&s)).unwrap()));
}

/// Constructions are memoized by parameters, so each iteration nudges `ε′` to force a fresh build.
fn polynomials(c: &mut Criterion) {
    let mut g = c.benchmark_group("polynomials");
    g.sample_size(10);
    for eps in [1e-2, 1e-4] {
        let mut k = 0u32;
        g.bench_with_input(BenchmarkId::new("rectangle", eps), &eps, |b, &e| {
            b.iter(|| {
                k += 1;
                rectangle_poly(0.1, e * (1.0 + 1e-9 * f64::from(k)), 0.5).unwrap()
            })
        });
        g.bench_with_input(BenchmarkId::new("positive_power", eps), &eps, |b, &e| {
            b.iter(|| {
                k += 1;
                positive_power_poly(0.25, e * (1.0 + 1e-9 * f64::from(k)), 0.5).unwrap()
            })
        });
    }
    g.finish();
}

fn constructions(c: &mut Criterion) {
    let mut g = c.benchmark_group("constructions");
    g.sample_size(10);
    let u = hermitian_encoding(4, 1.0, 3);
    let q = scale_poly(&positive_power_poly(0.25, 1e-3, 0.5).unwrap(), 0.5).unwrap();
    g.bench_function("poly_eigen_transform", |b| b.iter(|| poly_eigen_transform(&u, &q, 0.0).unwrap()));
    let four = hermitian_encoding(4, 4.0, 3);
    g.bench_function("up_scale", |b| b.iter(|| up_scale(&four, 2.0, 0.05).unwrap()));
    let up = up_scale(&four, 2.0, 0.05).unwrap();
    let target = up.target().scale_real(1.0 / up.alpha());
    g.bench_function("nearest_block_encoding", |b| b.iter(|| nearest_block_encoding(&up, &target).unwrap()));
    g.finish();
}

fn testers(c: &mut Criterion) {
    let mut g = c.benchmark_group("testers");
    g.sample_size(10);
    g.bench_function("gibbs_2000", |b| b.iter(|| gibbs_tester(8.0, GibbsVariant::Plain, 2000, 7).unwrap()));
    g.bench_function("phase_est_2000", |b| b.iter(|| phase_est_tester(1.0 / 16.0, None, 2000, 7).unwrap()));
    let rho = state(2, 5);
    let cfg = DmeConfig::calibrated(2.0, 0.1).unwrap();
    g.bench_function("dme_error_t2", |b| b.iter(|| dme_error(&rho, &cfg, 1).unwrap()));
    g.finish();
}

criterion_group!(benches, linear_algebra, polynomials, constructions, testers);
criterion_main!(benches);
