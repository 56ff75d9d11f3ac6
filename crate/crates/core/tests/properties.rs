use std::f64::consts::PI;

use proptest::prelude::*;
use qlift_core::blockenc::{down_scale, poly_eigen_transform, product, up_scale, upscale_query_count};
use qlift_core::channels::{
    channel_diamond_lb, channel_trace_distance, helstrom_measure, purify, DensityOperator, QuantumChannel,
};
use qlift_core::mat::{basis_vector, herm_eig, matrix_function, op_norm, partial_trace, trace_norm, ComplexMatrix, C64};
use qlift_core::polyapprox::{certify, mul_by_x, positive_power_poly, rectangle_poly, Parity, PolynomialApprox};
use qlift_core::primitives::{
    ae_distribution, dme_error, gibbs_state, hamiltonian_simulation, qpe_distribution, DmeConfig, GibbsSpec,
    GoodSubspace,
};
use qlift_core::random::{haar_state, haar_unitary, random_contraction, random_density, random_hermitian, seeded_rng};
use qlift_core::stats::loglog_slope;
use qlift_core::{BlockEncoding, QueryLedger};

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

fn conj(u: &ComplexMatrix, a: &ComplexMatrix) -> ComplexMatrix {
    u.matmul(a).matmul(&u.adjoint())
}

fn hermitian_with_norm(dim: usize, norm: f64, seed: u64) -> ComplexMatrix {
    let h = random_hermitian(dim, &mut seeded_rng(seed));
    h.scale_real(norm / op_norm(&h))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn eig_reconstructs(seed in any::<u64>(), dim in prop::sample::select(vec![1usize, 2, 3, 5, 8, 16, 33, 64])) {
        let a = random_hermitian(dim, &mut seeded_rng(seed)).scale_real(3.0);
        let back = herm_eig(&a).unwrap().reconstruct();
        prop_assert!(max_diff(&a, &back) <= 1e-10 * dim as f64);
    }

    #[test]
    fn exponential_squares(seed in any::<u64>(), dim in 1usize..12, s in -1.0f64..1.0) {
        let h = random_hermitian(dim, &mut seeded_rng(seed));
        let e1 = matrix_function(&h, |x| C64::new((s * x).exp(), 0.0)).unwrap();
        let e2 = matrix_function(&h, |x| C64::new((2.0 * s * x).exp(), 0.0)).unwrap();
        prop_assert!(max_diff(&e1.matmul(&e1), &e2) <= 1e-9);
    }

    #[test]
    fn trace_norm_dominates_op_norm(seed in any::<u64>(), dim in 1usize..10) {
        let mut rng = seeded_rng(seed);
        let a = random_contraction(dim, 1.7, &mut rng);
        prop_assert!(trace_norm(&a) >= op_norm(&a) - 1e-12);
        let (u, v) = (haar_state(dim, &mut rng), haar_state(dim, &mut rng));
        let rank_one = ComplexMatrix::outer(&u, &v).scale_real(0.6);
        prop_assert!((trace_norm(&rank_one) - op_norm(&rank_one)).abs() <= 1e-9);
    }

    #[test]
    fn partial_trace_keeps_trace(seed in any::<u64>(), da in 1usize..5, db in 1usize..5, traced in 0usize..2) {
        let a = random_contraction(da * db, 2.0, &mut seeded_rng(seed));
        let r = partial_trace(&a, &[da, db], traced).unwrap();
        prop_assert!((r.trace() - a.trace()).norm() <= 1e-12);
    }

    #[test]
    fn helstrom_invariant_under_common_unitary(seed in any::<u64>(), dim in 2usize..6) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(dim, dim, &mut rng);
        let sigma = random_density(dim, 1 + dim / 2, &mut rng);
        let u = haar_unitary(dim, &mut rng);
        let (_, p) = helstrom_measure(&rho, &sigma).unwrap();
        let (_, q) = helstrom_measure(&rho.conjugate(&u), &sigma.conjugate(&u)).unwrap();
        prop_assert!((p - q).abs() <= 1e-9);
    }

    #[test]
    fn purification_traces_back(seed in any::<u64>(), dim in 1usize..7, rank in 1usize..7) {
        let rho = random_density(dim, rank.min(dim), &mut seeded_rng(seed));
        let psi = purify(&rho);
        let back = partial_trace(&ComplexMatrix::outer(&psi, &psi), &[dim, dim], 1).unwrap();
        prop_assert!(max_diff(&back, rho.mat()) <= 1e-10);
    }

    #[test]
    fn poly_transform_commutes_with_conjugation(
        seed in any::<u64>(),
        c in prop::collection::vec(-0.12f64..0.12, 1..6),
    ) {
        let mut rng = seeded_rng(seed);
        let h = hermitian_with_norm(4, 0.9, seed);
        let v = haar_unitary(4, &mut rng);
        let p = PolynomialApprox::from_coeffs(c);
        let plain = poly_eigen_transform(&BlockEncoding::dilation_encode(&h, 1.0).unwrap(), &p, 0.0).unwrap();
        let rotated = poly_eigen_transform(&BlockEncoding::dilation_encode(&conj(&v, &h), 1.0).unwrap(), &p, 0.0).unwrap();
        prop_assert!(max_diff(&conj(&v, &plain.scaled_block()), &rotated.scaled_block()) <= 1e-9);
        prop_assert!(max_diff(&conj(&v, plain.target()), rotated.target()) <= 1e-9);
    }

    #[test]
    fn trace_distance_below_diamond_bound(seed in any::<u64>(), p in 0.0f64..1.0) {
        let mut rng = seeded_rng(seed);
        let e = QuantumChannel::unitary(&haar_unitary(2, &mut rng)).unwrap();
        let f = QuantumChannel::depolarizing(2, p).unwrap();
        let td = channel_trace_distance(&e, &f, seed).unwrap();
        let lb = channel_diamond_lb(&e, &f, seed).unwrap();
        prop_assert!(td <= lb + 1e-9, "{} > {}", td, lb);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn product_ledger_adds(qa in 0u64..50, qb in 0u64..50, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let la = QueryLedger::base("u").times(qa.max(1));
        let lb = QueryLedger::base("v").times(qb.max(1));
        let u = BlockEncoding::dilation_encode(&random_contraction(2, 0.8, &mut rng), 1.0).unwrap().with_ledger(la.clone());
        let v = BlockEncoding::dilation_encode(&random_contraction(2, 0.8, &mut rng), 1.0).unwrap().with_ledger(lb.clone());
        let w = product(&u, &v).unwrap();
        prop_assert!(w.ledger().same_counts(&(&la + &lb)));
        let d = down_scale(&u, 1.5).unwrap();
        prop_assert!(d.ledger().same_counts(u.ledger()));
    }

    #[test]
    fn down_then_up_scale_round_trip(seed in any::<u64>(), norm in 0.1f64..1.0, dim in prop::sample::select(vec![2usize, 4])) {
        let a = random_contraction(dim, norm, &mut seeded_rng(seed));
        let u = BlockEncoding::dilation_encode(&a, 2.0).unwrap();
        let shrunk = down_scale(&u, 2.0).unwrap().rescale(2.0);
        let back = up_scale(&shrunk, 2.0, 0.05).unwrap();
        let (residual, ok) = back.verify();
        prop_assert!(ok, "residual {} vs ε {}", residual, back.epsilon());
        prop_assert!(max_diff(back.target(), &a) <= 1e-12);
    }

    #[test]
    fn parity_is_respected(x in -1.0f64..1.0, eps in 0.02f64..0.3) {
        let even = rectangle_poly(0.1, eps, 0.5).unwrap();
        prop_assert_eq!(even.parity(), Parity::Even);
        prop_assert!((even.eval(x) - even.eval(-x)).abs() <= 1e-10);
        let pp = positive_power_poly(0.2, eps, 0.5).unwrap();
        prop_assert!((pp.eval(x) - pp.eval(-x)).abs() <= 1e-10);
        let odd = mul_by_x(&even).unwrap();
        prop_assert_eq!(odd.parity(), Parity::Odd);
        prop_assert!((odd.eval(x) + odd.eval(-x)).abs() <= 1e-10);
    }

    #[test]
    fn degree_grows_as_error_shrinks(e1 in 0.005f64..0.4, shrink in 0.05f64..1.0) {
        let e2 = e1 * shrink;
        let (r1, r2) = (rectangle_poly(0.1, e1, 0.5).unwrap(), rectangle_poly(0.1, e2, 0.5).unwrap());
        prop_assert!(r2.degree() >= r1.degree());
        let (p1, p2) = (positive_power_poly(0.2, e1, 0.5).unwrap(), positive_power_poly(0.2, e2, 0.5).unwrap());
        prop_assert!(p2.degree() >= p1.degree());
    }

    #[test]
    fn corrupted_coefficient_fails_certification(eps in 0.02f64..0.3, shift in 0.3f64..2.0) {
        let p = rectangle_poly(0.1, eps, 0.5).unwrap();
        prop_assert!(certify(&p).passed);
        let mut lines: Vec<String> = p.to_text().lines().map(str::to_string).collect();
        let c0: f64 = lines[1].parse().unwrap();
        lines[1] = format!("{:.16e}", c0 + shift);
        let bad = PolynomialApprox::from_text(&lines.join("\n")).unwrap();
        prop_assert!(!certify(&bad).passed);
    }

    #[test]
    fn exact_phase_is_read_exactly(m in 1usize..=6, seed in any::<u64>()) {
        let size = 1usize << m;
        let mut rng = seeded_rng(seed);
        let ks: Vec<usize> = (0..4).map(|_| rand::Rng::random_range(&mut rng, 0..size)).collect();
        let w = ComplexMatrix::from_diag(&ks.iter().map(|&k| C64::from_polar(1.0, 2.0 * PI * k as f64 / size as f64)).collect::<Vec<_>>());
        for (j, &k) in ks.iter().enumerate() {
            let dist = qpe_distribution(&w, &basis_vector(4, j), size);
            prop_assert!((dist[k] - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn amplitude_on_grid_is_read_on_grid(m in 2usize..=6, frac in 0.0f64..1.0) {
        let size = 1usize << m;
        let k = 1 + ((frac * (size / 2 - 1) as f64) as usize).min(size / 2 - 1);
        let p = (PI * k as f64 / size as f64).sin().powi(2);
        let (a, b) = (p.sqrt(), (1.0 - p).sqrt());
        let u = ComplexMatrix::from_real(2, &[a, -b, b, a]);
        let (p_true, dist) = ae_distribution(&u, GoodSubspace::FlagZero, size).unwrap();
        prop_assert!((p_true - p).abs() <= 1e-12);
        let on_grid = dist[k] + if k == size - k { 0.0 } else { dist[size - k] };
        prop_assert!((on_grid - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn hamsim_composes(seed in any::<u64>(), t1 in 0.1f64..3.0, t2 in 0.1f64..3.0) {
        let h = hermitian_with_norm(2, 0.95, seed);
        let u = BlockEncoding::dilation_encode(&h, 1.0).unwrap();
        let (e1, e2, e12) = (0.01, 0.02, 0.01);
        let a = hamiltonian_simulation(&u, t1, e1).unwrap();
        let b = hamiltonian_simulation(&u, t2, e2).unwrap();
        let ab = hamiltonian_simulation(&u, t1 + t2, e12).unwrap();
        let gap = op_norm(&(&a.scaled_block().matmul(&b.scaled_block()) - &ab.scaled_block()));
        prop_assert!(gap <= e1 + e2 + e12, "{}", gap);
    }

    #[test]
    fn cold_gibbs_state_is_ground(seed in any::<u64>(), gap in 0.5f64..1.0, dim in 2usize..6) {
        let mut rng = seeded_rng(seed);
        let mut energies = vec![-1.0];
        energies.extend((1..dim).map(|i| -1.0 + gap + 0.1 * i as f64));
        let v = haar_unitary(dim, &mut rng);
        let h = conj(&v, &ComplexMatrix::from_real_diag(&energies));
        let rho = gibbs_state(&GibbsSpec::new(50.0, h).unwrap()).unwrap();
        let ground = v.column(0);
        let overlap = rho.mat().mul_vec(&ground).iter().zip(&ground).map(|(x, g)| (g.conj() * x).re).sum::<f64>();
        prop_assert!(overlap >= 1.0 - 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn dme_error_shrinks_with_steps(seed in any::<u64>(), t in 0.5f64..3.0) {
        let rho: DensityOperator = random_density(2, 2, &mut seeded_rng(seed));
        let errors: Vec<f64> = [10, 30, 100, 300]
            .iter()
            .map(|&r| dme_error(&rho, &DmeConfig::with_steps(t, 0.1, r).unwrap(), seed).unwrap())
            .collect();
        for w in errors.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{:?}", errors);
        }
    }
}

#[test]
fn up_scale_queries_follow_log_inverse_error() {
    let base = BlockEncoding::dilation_encode(&ComplexMatrix::from_real_diag(&[0.3, -0.2]), 4.0)
        .unwrap()
        .with_ledger(QueryLedger::base("u"));
    for beta in [1.5, 2.0, 3.0] {
        let eps = [0.2, 0.05, 0.01, 0.002, 1e-4];
        let counts: Vec<f64> = eps
            .iter()
            .map(|&e| {
                let out = up_scale(&base, beta, e).unwrap();
                assert_eq!(out.ledger().total_queries(), upscale_query_count(4.0, beta, e));
                out.ledger().total_queries() as f64
            })
            .collect();
        let logs: Vec<f64> = eps.iter().map(|e| (1.0 / e).ln()).collect();
        let slope = loglog_slope(&logs, &counts);
        assert!((slope - 1.0).abs() < 0.1, "β = {beta}: slope {slope}");
    }
    let over_gap: Vec<f64> = [1.25, 1.5, 2.0, 3.0].iter().map(|b| 1.0 / (b - 1.0)).collect();
    let counts: Vec<f64> = [1.25, 1.5, 2.0, 3.0].iter().map(|&b| upscale_query_count(4.0, b, 0.01) as f64).collect();
    assert!((loglog_slope(&over_gap, &counts) - 1.0).abs() < 0.05);
}
