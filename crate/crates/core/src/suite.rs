//! Randomized contract sweeps over every construction and the numerical facts the
//! testers rely on. Each row draws its instances from its own seeded stream.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::Rng;

use crate::blockenc::{
    down_scale, lcu, nearest_block_encoding, poly_eigen_transform, product, roaa, substitute_oracle, up_scale,
    BlockEncoding, StatePreparationPair,
};
use crate::channels::{
    fuchs_van_de_graaf_check, helstrom_measure, qubit_measurement_grid_best, trace_distance, DensityOperator,
};
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::mat::{complete_columns, ComplexMatrix, C64};
use crate::polyapprox::{certify, positive_power_poly, rectangle_poly, PolynomialApprox};
use crate::primitives::{
    ae_distribution, ae_error_bound, ae_estimate, density_block_encoding, dme_error, purification_encoding,
    DmeConfig, GoodSubspace,
};
use crate::random::{
    gaussian_complex, haar_state, haar_unitary, random_contraction, random_density, trial_rng, unit_hermitian, QRng,
};
use crate::stats::{derive_seed, sample_outcomes};
use crate::tolerances::CONTRACT_SLACK;

/// Constructions checked against their declared `(α, a, ε)` contracts.
pub const CONSTRUCTOR_ROWS: [&str; 9] = [
    "product",
    "down_scale",
    "up_scale",
    "lcu",
    "roaa",
    "substitute_oracle",
    "poly_eigen_transform",
    "density_block_encoding",
    "purification_encoding",
];

/// Numerical facts outside the block-encoding contracts.
pub const PROPERTY_ROWS: [&str; 6] = [
    "up_scale_proximity",
    "helstrom_optimality",
    "fuchs_van_de_graaf",
    "polynomial_certification",
    "ae_coverage",
    "dme_error",
];

pub const DEFAULT_CONSTRUCTOR_INSTANCES: usize = 500;

/// `2√2·ε′/√(16 − (1+ε′)²)` for `(α, β) = (4, 2)` and an input with `‖A‖ ≤ ½`.
pub fn up_scale_proximity_bound(eps_prime: f64) -> f64 {
    2.0 * 2f64.sqrt() * eps_prime / (16.0 - (1.0 + eps_prime).powi(2)).sqrt()
}

pub fn row_names() -> Vec<&'static str> {
    CONSTRUCTOR_ROWS.iter().chain(PROPERTY_ROWS.iter()).copied().collect()
}

/// One instance: `measured ≤ allowed` passes.
#[derive(Clone, Copy, Debug)]
struct Outcome {
    measured: f64,
    allowed: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteRow {
    pub name: String,
    pub instances: usize,
    pub passed: usize,
    /// Largest `measured/allowed` seen.
    pub worst_ratio: f64,
    pub first_failure: Option<String>,
}

impl SuiteRow {
    pub fn passes(&self) -> bool {
        self.instances > 0 && self.passed == self.instances
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub rows: Vec<SuiteRow>,
}

impl SuiteReport {
    pub fn verdict(&self) -> bool {
        self.rows.iter().all(SuiteRow::passes)
    }

    pub fn row(&self, name: &str) -> Option<&SuiteRow> {
        self.rows.iter().find(|r| r.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite verify_all");
        let _ = writeln!(s, "seed {}", self.seed);
        for r in &self.rows {
            let _ = writeln!(s, "row {}", r.name);
            let _ = writeln!(s, "  instances {}", r.instances);
            let _ = writeln!(s, "  passed {}", r.passed);
            let _ = writeln!(s, "  worst_ratio {:.6e}", r.worst_ratio);
            if let Some(f) = &r.first_failure {
                let _ = writeln!(s, "  first_failure {f}");
            }
            let _ = writeln!(s, "  verdict {}", if r.passes() { "pass" } else { "fail" });
        }
        let _ = writeln!(s, "verdict {}", if self.verdict() { "pass" } else { "fail" });
        s
    }

    /// Aligned `row  passed/instances  verdict` table.
    pub fn table(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut s = String::new();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:width$}  {:>5}/{:<5}  {}",
                r.name,
                r.passed,
                r.instances,
                if r.passes() { "pass" } else { "FAIL" }
            );
        }
        s
    }

    /// Rows in the tester summary layout: frequency is the pass fraction, threshold 1.
    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                let f = r.passed as f64 / r.instances.max(1) as f64;
                format!("verify_all,{},{f:.6},,{:.6},{}", r.name, 1.0, if r.passes() { "pass" } else { "fail" })
            })
            .collect()
    }
}

/// Runs the named rows (all of them when `only` is empty). Constructor rows use
/// `instances` draws; property rows use their own fixed sizes.
pub fn verify_all(seed: u64, only: &[String], instances: usize) -> Result<SuiteReport> {
    let names = row_names();
    for o in only {
        if !names.contains(&o.as_str()) {
            return Err(Error::ParameterOutOfRange(format!("unknown suite row {o:?}")));
        }
    }
    let mut rows = Vec::new();
    for (k, name) in names.iter().enumerate() {
        if !only.is_empty() && !only.iter().any(|o| o == name) {
            continue;
        }
        rows.push(run_row(name, instances, derive_seed(seed, k as u64))?);
    }
    Ok(SuiteReport { seed, rows })
}

/// A single row by name with an explicit row seed.
pub fn run_row(name: &str, instances: usize, seed: u64) -> Result<SuiteRow> {
    let gen: fn(&mut QRng, usize) -> Result<Outcome> = match name {
        "product" => product_instance,
        "down_scale" => down_scale_instance,
        "up_scale" => up_scale_instance,
        "lcu" => lcu_instance,
        "roaa" => roaa_instance,
        "substitute_oracle" => substitute_instance,
        "poly_eigen_transform" => eigen_transform_instance,
        "density_block_encoding" => density_instance,
        "purification_encoding" => purification_instance,
        "up_scale_proximity" => return Ok(collect(name, 20, seed, proximity_instance)),
        "helstrom_optimality" => return Ok(collect(name, 50, seed, helstrom_instance)),
        "fuchs_van_de_graaf" => return Ok(collect(name, 1000, seed, fvdg_instance)),
        "polynomial_certification" => return Ok(collect(name, 8, seed, certification_instance)),
        "ae_coverage" => return Ok(collect(name, 3, seed, coverage_instance)),
        "dme_error" => return Ok(collect(name, 6, seed, dme_instance)),
        _ => return Err(Error::ParameterOutOfRange(format!("unknown suite row {name:?}"))),
    };
    Ok(collect(name, instances, seed, gen))
}

fn collect(name: &str, count: usize, seed: u64, gen: impl Fn(&mut QRng, usize) -> Result<Outcome>) -> SuiteRow {
    let mut row = SuiteRow { name: name.into(), instances: count, passed: 0, worst_ratio: 0.0, first_failure: None };
    for i in 0..count {
        let mut rng = trial_rng(seed, i as u64);
        let verdict = match gen(&mut rng, i) {
            Ok(o) => {
                let ratio = if o.allowed > 0.0 {
                    o.measured / o.allowed
                } else if o.measured <= o.allowed {
                    0.0
                } else {
                    f64::INFINITY
                };
                row.worst_ratio = row.worst_ratio.max(ratio);
                if o.measured <= o.allowed {
                    Ok(())
                } else {
                    Err(format!("instance {i}: {:.6e} > {:.6e}", o.measured, o.allowed))
                }
            }
            Err(e) => Err(format!("instance {i}: {e}")),
        };
        match verdict {
            Ok(()) => row.passed += 1,
            Err(msg) => {
                row.first_failure.get_or_insert(msg);
            }
        }
    }
    row
}

fn contract(e: &BlockEncoding) -> Outcome {
    let (measured, ok) = e.verify();
    // a non-unitary core fails regardless of the residual
    let allowed = if ok { e.epsilon() + CONTRACT_SLACK } else { -1.0 };
    Outcome { measured, allowed }
}

/// Exact dilation of a random operator of norm `≤ α`, perturbed on odd instances.
fn random_encoding(rng: &mut QRng, dim: usize, alpha: f64, i: usize) -> Result<BlockEncoding> {
    let a = random_contraction(dim, alpha * rng.random_range(0.1..1.0), rng);
    maybe_perturb(BlockEncoding::dilation_encode(&a, alpha)?, rng, i)
}

fn maybe_perturb(e: BlockEncoding, rng: &mut QRng, i: usize) -> Result<BlockEncoding> {
    if i % 2 == 1 {
        let delta = rng.random_range(1e-4..0.02);
        e.perturb(delta, rng.random())
    } else {
        Ok(e)
    }
}

fn product_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let dim = 1 << rng.random_range(1..=2);
    let (au, av) = (rng.random_range(1.0..3.0), rng.random_range(1.0..3.0));
    let u = random_encoding(rng, dim, au, i)?;
    let v = random_encoding(rng, dim, av, i)?;
    Ok(contract(&product(&u, &v)?))
}

fn down_scale_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let dim = 1 << rng.random_range(1..=2);
    let alpha = rng.random_range(1.0..3.0);
    let u = random_encoding(rng, dim, alpha, i)?;
    Ok(contract(&down_scale(&u, rng.random_range(1.05..6.0))?))
}

const UPSCALE_PARAMS: [(f64, f64, f64); 3] = [(4.0, 2.0, 0.05), (3.0, 1.5, 0.1), (6.0, 2.0, 0.02)];

fn up_scale_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let (alpha, beta, eps_prime) = UPSCALE_PARAMS[i % UPSCALE_PARAMS.len()];
    let dim = 1 << rng.random_range(1..=2);
    let a = random_contraction(dim, rng.random_range(0.1..1.0), rng);
    let u = BlockEncoding::dilation_encode(&a, alpha)?;
    let u = if i % 2 == 1 { u.perturb(rng.random_range(1e-8..1e-6), rng.random())? } else { u };
    Ok(contract(&up_scale(&u, beta, eps_prime)?))
}

fn lcu_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let dim = 1 << rng.random_range(1..=2);
    let terms = rng.random_range(1..=4);
    let alpha = rng.random_range(1.0..2.0);
    let y: Vec<C64> = (0..terms).map(|_| gaussian_complex(rng)).collect();
    let pair = StatePreparationPair::for_coefficients(&y)?;
    let mut encs = Vec::with_capacity(terms);
    let delta = if i % 2 == 1 { rng.random_range(1e-4..0.02) } else { 0.0 };
    for _ in 0..terms {
        let a = random_contraction(dim, alpha * rng.random_range(0.1..1.0), rng);
        let e = BlockEncoding::dilation_encode(&a, alpha)?;
        // every term shares the declared ε₂ of the largest kick
        let e = if delta > 0.0 { e.perturb(delta, rng.random())? } else { e };
        encs.push(e);
    }
    let eps2 = encs.iter().map(BlockEncoding::epsilon).fold(0.0, f64::max);
    let encs: Vec<BlockEncoding> = encs.into_iter().map(|e| e.with_epsilon(eps2)).collect();
    Ok(contract(&lcu(&pair, &encs)?))
}

fn roaa_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let m = [1, 3, 5, 7][i % 4];
    let dim = 1 << rng.random_range(1..=2);
    let w = haar_unitary(dim, rng);
    let s = (PI / (2.0 * m as f64)).sin();
    let u = BlockEncoding::dilation_encode(&w.scale_real(s), 1.0)?;
    let u = if i % 2 == 1 { u.perturb(rng.random_range(1e-5..1e-3), rng.random())? } else { u };
    Ok(contract(&roaa(&u, m)?))
}

const CIRCUITS: [&str; 4] = [
    "qubits 1\noracle 0",
    "qubits 2\nh 0\ncoracle 0 1\nh 0",
    "qubits 2\nh 0\ncoracle 0 1\noracle_dg 1\ncx 0 1\noracle 1",
    "qubits 3\nh 1\noracle 2\ncx 1 2\ncoracle_dg 0 1\nswap 0 2\noracle 0",
];

fn substitute_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let circuit = Circuit::parse(CIRCUITS[i % CIRCUITS.len()])?;
    let w = haar_unitary(2, rng);
    let v = BlockEncoding::dilation_encode(&w, 1.0)?;
    let v = maybe_perturb(v, rng, i / CIRCUITS.len())?;
    Ok(contract(&substitute_oracle(&circuit, &v)?))
}

/// Random Chebyshev series of degree ≤ 8, scaled so `sup |p| ≤ ½`.
fn random_half_bounded(rng: &mut QRng) -> PolynomialApprox {
    let deg = rng.random_range(1..=8);
    let parity = rng.random_range(0..3);
    let coeffs: Vec<f64> = (0..=deg)
        .map(|k| match parity {
            0 if k % 2 == 1 => 0.0,
            1 if k % 2 == 0 => 0.0,
            _ => rng.random_range(-1.0..1.0),
        })
        .collect();
    let p = PolynomialApprox::from_coeffs(coeffs.clone());
    let s = 0.5 / p.sup_bound().max(1e-3);
    PolynomialApprox::from_coeffs(coeffs.iter().map(|c| c * s.min(1.0)).collect())
}

fn eigen_transform_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let dim = 1 << rng.random_range(1..=2);
    let alpha = rng.random_range(1.0..2.0);
    let h = unit_hermitian(dim, rng).scale_real(alpha * rng.random_range(0.1..1.0));
    let u = maybe_perturb(BlockEncoding::dilation_encode(&h, alpha)?, rng, i)?;
    let p = random_half_bounded(rng);
    Ok(contract(&poly_eigen_transform(&u, &p, 0.0)?))
}

/// A unitary whose first column is a random pure state on `system + env` qubits.
fn random_purifier(rng: &mut QRng, qubits: usize) -> ComplexMatrix {
    let dim = 1 << qubits;
    let psi = haar_state(dim, rng);
    let mut v = ComplexMatrix::zeros(dim);
    v.set_column(0, &psi);
    let mut filled = vec![false; dim];
    filled[0] = true;
    complete_columns(&mut v, &filled);
    v
}

fn density_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let system = rng.random_range(1..=2);
    let env = rng.random_range(0..=1);
    let v = random_purifier(rng, system + env);
    let beta = [1.0, 2.0][i % 2];
    let u = BlockEncoding::dilation_encode(&v, beta)?;
    let u = if (i / 2) % 2 == 1 { u.perturb(rng.random_range(1e-4..0.01), rng.random())? } else { u };
    Ok(contract(&density_block_encoding(&u, system)?))
}

/// `(β, N, κ, ε)` with `ε < 1/(4βN)`; the construction cost depends only on these.
const PURIFICATION_PARAMS: [(f64, usize, f64, f64); 4] =
    [(1.0, 2, 4.0, 0.05), (1.0, 2, 8.0, 0.1), (2.0, 2, 4.0, 0.05), (1.0, 4, 16.0, 0.04)];

fn purification_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let (beta, dim, kappa, eps) = PURIFICATION_PARAMS[i % PURIFICATION_PARAMS.len()];
    // mixing with I/N keeps every eigenvalue at or above 1/κ
    let t = 1.0 - dim as f64 / kappa;
    let r = random_density(dim, rng.random_range(1..=dim), rng);
    let mixed = &r.mat().scale_real(t) + &ComplexMatrix::identity(dim).scale_real((1.0 - t) / dim as f64);
    let rho = DensityOperator::new(mixed)?;
    let u = BlockEncoding::dilation_encode(rho.mat(), beta)?;
    Ok(contract(&purification_encoding(&u, kappa, eps)?))
}

/// `A = 2ρ` with `‖ρ‖ ≤ ¼` up-scaled from `α = 4` to `β = 2`; distance to the
/// nearest exact encoding of `ρ`.
pub fn up_scale_proximity(rho: &DensityOperator, eps_prime: f64) -> Result<f64> {
    let a = rho.mat().scale_real(2.0);
    let up = up_scale(&BlockEncoding::dilation_encode(&a, 4.0)?, 2.0, eps_prime)?;
    let (_, dist) = nearest_block_encoding(&up, rho.mat())?;
    Ok(dist)
}

fn proximity_instance(rng: &mut QRng, _: usize) -> Result<Outcome> {
    let r = random_density(8, rng.random_range(1..=8), rng);
    let rho = DensityOperator::new(&r.mat().scale_real(0.1) + &ComplexMatrix::identity(8).scale_real(0.9 / 8.0))?;
    Ok(Outcome { measured: up_scale_proximity(&rho, 0.05)?, allowed: up_scale_proximity_bound(0.05) + 1e-6 })
}

fn random_qubit_state(rng: &mut QRng) -> DensityOperator {
    random_density(2, rng.random_range(1..=2), rng)
}

fn helstrom_instance(rng: &mut QRng, _: usize) -> Result<Outcome> {
    let (r0, r1) = (random_qubit_state(rng), random_qubit_state(rng));
    let optimum = 0.5 * (1.0 + trace_distance(&r0, &r1)?);
    let (povm, value) = helstrom_measure(&r0, &r1)?;
    let grid = qubit_measurement_grid_best(&r0, &r1, 360);
    let excess = (grid - optimum).max((value - optimum).abs()).max((povm.success_probability(&r0, &r1) - optimum).abs());
    Ok(Outcome { measured: excess, allowed: 1e-6 })
}

fn fvdg_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let dim = [2, 4, 8][i % 3];
    let r = random_density(dim, rng.random_range(1..=dim), rng);
    let s = random_density(dim, rng.random_range(1..=dim), rng);
    let ok = fuchs_van_de_graaf_check(&r, &s)?;
    Ok(Outcome { measured: if ok { 0.0 } else { 1.0 }, allowed: 0.5 })
}

fn certification_instance(_: &mut QRng, i: usize) -> Result<Outcome> {
    let eps = [1e-1, 1e-2, 1e-3, 1e-4][i % 4];
    let p = if i < 4 { rectangle_poly(0.1, eps, 0.5)? } else { positive_power_poly(0.25, eps, 0.5)? };
    let c = certify(&p);
    Ok(Outcome { measured: c.failures.len() as f64, allowed: 0.0 })
}

/// Single-qubit `U` with `|⟨0|U|0⟩|² = p`.
pub fn amplitude_unitary(p: f64) -> ComplexMatrix {
    let (a, b) = (p.sqrt(), (1.0 - p).sqrt());
    ComplexMatrix::from_real(2, &[a, -b, b, a])
}

/// Fraction of `draws` sampled estimates within the error bound of `p`.
pub fn ae_empirical_coverage(p: f64, m_size: usize, draws: usize, seed: u64) -> Result<f64> {
    let (p_true, dist) = ae_distribution(&amplitude_unitary(p), GoodSubspace::FlagZero, m_size)?;
    let bound = ae_error_bound(p_true, m_size);
    let hits = sample_outcomes(&dist, draws, seed)
        .into_iter()
        .filter(|&y| (ae_estimate(y, m_size) - p_true).abs() <= bound + 1e-12)
        .count();
    Ok(hits as f64 / draws as f64)
}

fn coverage_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let p = [1.0 / 64.0, 0.25, 9.0 / 64.0][i % 3];
    let c = ae_empirical_coverage(p, 64, 5000, rng.random())?;
    let floor = 8.0 / (PI * PI) - 0.03;
    Ok(Outcome { measured: floor - c, allowed: 0.0 })
}

fn dme_instance(rng: &mut QRng, i: usize) -> Result<Outcome> {
    let t = [0.5, 1.0, 2.0][i % 3];
    let dim = [2, 4][i / 3 % 2];
    let rho = random_density(dim, rng.random_range(1..=dim), rng);
    let cfg = DmeConfig::calibrated(t, 0.1)?;
    Ok(Outcome { measured: dme_error(&rho, &cfg, rng.random())?, allowed: 0.1 })
}
