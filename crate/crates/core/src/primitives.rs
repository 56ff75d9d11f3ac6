//! Building blocks consumed by the testers: phase and amplitude estimation,
//! Hamiltonian simulation, Gibbs states, density matrix exponentiation and the
//! state block-encodings.
//!
//! Estimation routines compute the exact output distribution of the readout
//! register and then draw seeded trials from it.

use std::f64::consts::{E, PI};

use crate::blockenc::{clip, down_scale, poly_eigen_transform, product, up_scale, BlockEncoding, QueryLedger};
use crate::channels::{channel_trace_distance, DensityOperator, QuantumChannel};
use crate::error::{Error, Result};
use crate::gates;
use crate::mat::{
    basis_vector, herm_eig, inner, kron_vec, matrix_function, matrix_function_real, norm, normalized, op_norm,
    partial_trace, qubits_for, ComplexMatrix, C64, ZERO,
};
use crate::polyapprox::{chebyshev_interpolate, positive_power_poly, scale_poly, PolynomialApprox};
use crate::stats::sample_outcomes;
use crate::tolerances::{CONTRACT_SLACK, EIGVEC_TOL, HERMITIAN_INPUT_TOL};

/// Sampled output of an estimation routine.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimates {
    /// Exact probability of each readout value `y ∈ [0, M)`.
    pub distribution: Vec<f64>,
    /// One estimate per trial.
    pub estimates: Vec<f64>,
}

/// `Pr(y) = ‖Σ_k e^{−2πiky/M} W^k ψ‖² / M²`, the readout distribution of textbook
/// phase estimation with an `M`-outcome register.
pub fn qpe_distribution(w: &ComplexMatrix, psi: &[C64], m_size: usize) -> Vec<f64> {
    let mut powers = Vec::with_capacity(m_size);
    let mut v = psi.to_vec();
    for _ in 0..m_size {
        let next = w.mul_vec(&v);
        powers.push(v);
        v = next;
    }
    let mf = m_size as f64;
    (0..m_size)
        .map(|y| {
            let mut acc = vec![ZERO; psi.len()];
            for (k, wk) in powers.iter().enumerate() {
                let phase = C64::from_polar(1.0, -2.0 * PI * ((k * y) % m_size) as f64 / mf);
                for (a, z) in acc.iter_mut().zip(wk) {
                    *a += phase * z;
                }
            }
            norm(&acc).powi(2) / (mf * mf)
        })
        .collect()
}

/// Phase estimation with `m` readout bits on an eigenvector of the unitary encoded by `v`.
///
/// Estimates are `2πy/2^m ∈ [0, 2π)` for `V|ψ⟩ = e^{iλ}|ψ⟩`. The circuit runs on the
/// stored unitary with its ancillas in `|0⟩`.
pub fn phase_estimation(v: &BlockEncoding, eigvec: &[C64], m: usize, trials: usize, seed: u64) -> Result<Estimates> {
    if (v.alpha() - 1.0).abs() > CONTRACT_SLACK {
        return Err(Error::AlphaNotOne(v.alpha()));
    }
    if eigvec.len() != v.system_dim() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvector of length {} for a {}-dimensional unitary",
            eigvec.len(),
            v.system_dim()
        )));
    }
    if !(1..=16).contains(&m) {
        return Err(Error::ParameterOutOfRange(format!("readout bits m = {m} outside 1..=16")));
    }
    let psi = normalized(eigvec);
    let tv = v.target().mul_vec(&psi);
    let lam = inner(&psi, &tv);
    let resid: f64 = tv.iter().zip(&psi).map(|(a, b)| (a - lam * b).norm_sqr()).sum::<f64>().sqrt();
    if resid > EIGVEC_TOL {
        return Err(Error::NotEigenvector(resid));
    }
    let u = v.unitary();
    let start = kron_vec(&basis_vector(u.dim() / v.system_dim(), 0), &psi);
    let m_size = 1usize << m;
    let distribution = qpe_distribution(&u, &start, m_size);
    let estimates = sample_outcomes(&distribution, trials, seed)
        .into_iter()
        .map(|y| 2.0 * PI * y as f64 / m_size as f64)
        .collect();
    Ok(Estimates { distribution, estimates })
}

/// Folds a phase into `[0, 2π)`.
pub fn fold_phase(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r >= 2.0 * PI {
        0.0
    } else {
        r
    }
}

/// Circular distance between two phases.
pub fn phase_gap(a: f64, b: f64) -> f64 {
    let d = fold_phase(a - b);
    d.min(2.0 * PI - d)
}

/// Which basis states of `U|0⟩` count as good.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoodSubspace {
    /// Leading (flag) qubit reads 0.
    FlagZero,
    /// Every qubit reads 0.
    AllZero,
}

impl GoodSubspace {
    fn contains(self, index: usize, dim: usize) -> bool {
        match self {
            GoodSubspace::FlagZero => index < dim / 2,
            GoodSubspace::AllZero => index == 0,
        }
    }
}

/// Exact amplitude-estimation setup: the good amplitude `p` and the readout distribution
/// of phase estimation on `Q = −U S₀ U† S_χ` started from `U|0⟩`.
pub fn ae_distribution(u: &ComplexMatrix, good: GoodSubspace, m_size: usize) -> Result<(f64, Vec<f64>)> {
    let dim = u.dim();
    if qubits_for(dim).is_none_or(|q| q == 0) {
        return Err(Error::MalformedU(format!("dimension {dim} is not a power of two ≥ 2")));
    }
    let defect = u.unitarity_defect();
    if defect > 1e-9 {
        return Err(Error::MalformedU(format!("not unitary (defect {defect:.3e})")));
    }
    if m_size < 2 || !m_size.is_power_of_two() {
        return Err(Error::ParameterOutOfRange(format!("M = {m_size} must be a power of two ≥ 2")));
    }
    let psi = u.column(0);
    let p: f64 = psi
        .iter()
        .enumerate()
        .filter(|(i, _)| good.contains(*i, dim))
        .map(|(_, z)| z.norm_sqr())
        .sum();
    // S_χ = I − 2Π_good, S₀ = I − 2|0⟩⟨0|
    let s_chi = ComplexMatrix::from_real_diag(
        &(0..dim).map(|i| if good.contains(i, dim) { -1.0 } else { 1.0 }).collect::<Vec<_>>(),
    );
    let mut s0 = ComplexMatrix::identity(dim);
    s0[(0, 0)] = C64::new(-1.0, 0.0);
    let q = u.matmul(&s0).matmul(&u.adjoint()).matmul(&s_chi).scale_real(-1.0);
    Ok((p.clamp(0.0, 1.0), qpe_distribution(&q, &psi, m_size)))
}

/// `2π√(p(1−p))/M + π²/M²`
pub fn ae_error_bound(p: f64, m_size: usize) -> f64 {
    let mf = m_size as f64;
    2.0 * PI * (p * (1.0 - p)).max(0.0).sqrt() / mf + PI * PI / (mf * mf)
}

/// `sin²(πy/M)`
pub fn ae_estimate(y: usize, m_size: usize) -> f64 {
    (PI * y as f64 / m_size as f64).sin().powi(2)
}

/// Exact probability that a single run lands within [`ae_error_bound`] of `p`.
pub fn ae_coverage(u: &ComplexMatrix, good: GoodSubspace, m_size: usize) -> Result<f64> {
    let (p, dist) = ae_distribution(u, good, m_size)?;
    let bound = ae_error_bound(p, m_size);
    Ok(dist
        .iter()
        .enumerate()
        .filter(|(y, _)| (ae_estimate(*y, m_size) - p).abs() <= bound + 1e-12)
        .map(|(_, w)| w)
        .sum())
}

/// Amplitude estimation of the probability that the flag qubit of `U|0⟩` reads 0.
pub fn amplitude_estimation(u: &ComplexMatrix, m_size: usize, trials: usize, seed: u64) -> Result<Estimates> {
    amplitude_estimation_on(u, GoodSubspace::FlagZero, m_size, trials, seed)
}

pub fn amplitude_estimation_on(
    u: &ComplexMatrix,
    good: GoodSubspace,
    m_size: usize,
    trials: usize,
    seed: u64,
) -> Result<Estimates> {
    let (_, distribution) = ae_distribution(u, good, m_size)?;
    let estimates = sample_outcomes(&distribution, trials, seed)
        .into_iter()
        .map(|y| ae_estimate(y, m_size))
        .collect();
    Ok(Estimates { distribution, estimates })
}

/// `⌈|t| + ln(1/ε)/ln(e + ln(1/ε)/|t|)⌉`
pub fn hamsim_query_count(t: f64, eps: f64) -> u64 {
    let t = t.abs();
    if t == 0.0 {
        return 0;
    }
    let l = (1.0 / eps).ln();
    (t + l / (E + l / t).ln()).ceil() as u64
}

/// Chebyshev series of `f` truncated where the discarded tail sums to at most `tol`.
fn truncated_series(f: impl Fn(f64) -> f64, t: f64, tol: f64) -> Vec<f64> {
    let n = (2.0 * t.abs() + 64.0).ceil() as usize;
    let mut c = chebyshev_interpolate(f, n, -1.0, 1.0);
    let mut tail = 0.0;
    let mut keep = c.len();
    while keep > 1 && tail + c[keep - 1].abs() <= tol {
        tail += c[keep - 1].abs();
        keep -= 1;
    }
    c.truncate(keep);
    c
}

/// Block-encoding of `e^{−iHt}` from a `(1, a, 0)`-encoding of Hermitian `H`:
/// contract `(1, a+2, ε)`.
///
/// The block is `C(B) − iS(B)` for truncated Chebyshev series of `cos(tx)` and
/// `sin(tx)`, each within `ε/4`, rescaled into the unit ball.
pub fn hamiltonian_simulation(u: &BlockEncoding, t: f64, eps: f64) -> Result<BlockEncoding> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::ParameterOutOfRange(format!("ε = {eps} outside (0, ½)")));
    }
    if !t.is_finite() {
        return Err(Error::ParameterOutOfRange(format!("t = {t}")));
    }
    if (u.alpha() - 1.0).abs() > CONTRACT_SLACK {
        return Err(Error::ParameterOutOfRange(format!("needs α = 1, got {}", u.alpha())));
    }
    let defect = u.target().hermitian_defect();
    if defect > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { defect });
    }
    let h = u.target().hermitian_part();
    let hn = op_norm(&h);
    if hn > 1.0 + CONTRACT_SLACK {
        return Err(Error::ParameterOutOfRange(format!("‖H‖ = {hn} > 1")));
    }
    let cos_c = truncated_series(|x| (t * x).cos(), t, eps / 4.0);
    let mut sin_c = truncated_series(|x| (t * x).sin(), t, eps / 4.0);
    // interpolation leaves ~1e-16 even-index noise in the odd series
    let mut cos_c = cos_c;
    for (k, c) in cos_c.iter_mut().enumerate() {
        if k % 2 == 1 {
            *c = 0.0;
        }
    }
    for (k, c) in sin_c.iter_mut().enumerate() {
        if k % 2 == 0 {
            *c = 0.0;
        }
    }
    let b = u.block().hermitian_part();
    let eval = |coeffs: &[f64]| {
        let p = PolynomialApprox::from_coeffs(coeffs.to_vec());
        matrix_function_real(&b, move |x| p.eval(x))
    };
    let block = &eval(&cos_c)? - &eval(&sin_c)?.scale(C64::new(0.0, 1.0));
    let block = clip(block);
    let target = matrix_function(&h, |x| C64::from_polar(1.0, -x * t))?;
    let q = hamsim_query_count(t, eps);
    let mut ledger = u.ledger().times(q);
    ledger.note(
        "hamiltonian_simulation",
        "ceil(|t| + ln(1/ε)/ln(e + ln(1/ε)/|t|))",
        &format!("constant 1, t = {t}, ε = {eps}"),
    );
    let epsilon = eps + t.abs() * u.epsilon();
    BlockEncoding::semantic(&block, u.n(), u.a() + 2, 1.0, epsilon, target, ledger)
}

/// Inverse temperature and Hamiltonian of a Gibbs state.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsSpec {
    pub beta: f64,
    pub hamiltonian: ComplexMatrix,
}

impl GibbsSpec {
    pub fn new(beta: f64, hamiltonian: ComplexMatrix) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::ParameterOutOfRange(format!("β = {beta} must be finite and ≥ 0")));
        }
        let defect = hamiltonian.hermitian_defect();
        if defect > HERMITIAN_INPUT_TOL {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { beta, hamiltonian: hamiltonian.hermitian_part() })
    }
}

/// `e^{−βH}/tr(e^{−βH})`, computed with the ground energy shifted out.
pub fn gibbs_state(spec: &GibbsSpec) -> Result<DensityOperator> {
    let eig = herm_eig(&spec.hamiltonian)?;
    let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let w = eig.apply(|x| C64::new((-spec.beta * (x - e0)).exp(), 0.0));
    let z = w.trace().re;
    DensityOperator::new(w.scale_real(1.0 / z).hermitian_part())
}

/// `⌈2 ln N⌉`, the inverse temperature used for search.
pub fn search_beta(n: usize) -> f64 {
    (2.0 * (n as f64).ln()).ceil()
}

/// Step constant chosen so that `r = ⌈c_r t²/δ⌉` steps meet the target error on the
/// calibration instances with a factor-2 margin (see `dme_calibration` in the tests).
pub const DEFAULT_C_R: f64 = 4.0;

/// Parameters of density matrix exponentiation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DmeConfig {
    pub t: f64,
    pub delta: f64,
    pub steps: usize,
    pub c_r: f64,
}

impl DmeConfig {
    /// `r = max(1, ⌈c_r t²/δ⌉)`.
    pub fn new(t: f64, delta: f64, c_r: f64) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) || !(delta > 0.0) || !(c_r > 0.0) {
            return Err(Error::ParameterOutOfRange(format!("t = {t}, δ = {delta}, c_r = {c_r}")));
        }
        let steps = ((c_r * t * t / delta).ceil() as usize).max(1);
        Ok(Self { t, delta, steps, c_r })
    }

    pub fn calibrated(t: f64, delta: f64) -> Result<Self> {
        Self::new(t, delta, DEFAULT_C_R)
    }

    /// A fixed step count; `c_r` is recorded as a value reproducing `r` through the formula.
    pub fn with_steps(t: f64, delta: f64, steps: usize) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) || !(delta > 0.0) || steps == 0 {
            return Err(Error::ParameterOutOfRange(format!("t = {t}, δ = {delta}, r = {steps}")));
        }
        let c_r = if t == 0.0 { 1.0 } else { (steps as f64 - 0.5) * delta / (t * t) };
        Ok(Self { t, delta, steps, c_r })
    }
}

/// One step `σ ↦ tr₂(e^{−iSΔ}(σ⊗ρ)e^{iSΔ})` in Kraus form.
fn dme_step(rho: &DensityOperator, dt: f64) -> Result<QuantumChannel> {
    let d = rho.dim();
    let swap = gates::swap_registers(d);
    let w = &ComplexMatrix::identity(d * d).scale_real(dt.cos()) - &swap.scale(C64::new(0.0, dt.sin()));
    let eig = herm_eig(rho.mat())?;
    let mut kraus = Vec::new();
    for k in 0..d {
        let lam = eig.eigenvalues[k];
        if lam <= 1e-15 {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        for l in 0..d {
            let kr = ComplexMatrix::from_fn(d, |i, j| {
                let mut s = ZERO;
                for (m, vm) in v.iter().enumerate() {
                    s += w[(i * d + l, j * d + m)] * vm;
                }
                s * lam.sqrt()
            });
            kraus.push(kr);
        }
    }
    QuantumChannel::new(kraus)
}

/// `r` repetitions of the partial-swap step with `Δ = t/r`, each consuming one copy of `ρ`.
pub fn dme_channel(rho: &DensityOperator, cfg: &DmeConfig) -> Result<QuantumChannel> {
    if !(cfg.t >= 0.0) || cfg.steps == 0 {
        return Err(Error::ParameterOutOfRange(format!("t = {}, r = {}", cfg.t, cfg.steps)));
    }
    if cfg.t == 0.0 {
        return Ok(QuantumChannel::identity(rho.dim()));
    }
    dme_step(rho, cfg.t / cfg.steps as f64)?.power(cfg.steps)
}

/// The exact unitary channel `σ ↦ e^{−iρt} σ e^{iρt}`.
pub fn dme_reference(rho: &DensityOperator, t: f64) -> Result<QuantumChannel> {
    QuantumChannel::unitary(&matrix_function(rho.mat(), |x| C64::from_polar(1.0, -x * t))?)
}

/// Measured trace-norm distance between `dme_channel` and the exact evolution.
pub fn dme_error(rho: &DensityOperator, cfg: &DmeConfig, seed: u64) -> Result<f64> {
    channel_trace_distance(&dme_channel(rho, cfg)?, &dme_reference(rho, cfg.t)?, seed)
}

/// Smallest `r` whose measured error is at most `delta`, found by doubling and bisection.
pub fn dme_required_steps(rho: &DensityOperator, t: f64, delta: f64, seed: u64) -> Result<usize> {
    let err = |r: usize| -> Result<f64> { dme_error(rho, &DmeConfig::with_steps(t, delta, r)?, seed) };
    let mut hi = 1usize;
    while err(hi)? > delta {
        hi *= 2;
        if hi > 1 << 24 {
            return Err(Error::ConstructionFailed(format!("no step count below 2^24 reaches δ = {delta}")));
        }
    }
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(1);
    }
    // invariant: err(lo) > δ ≥ err(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if err(mid)? <= delta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Sample constant `c_s` in the budget `⌈c_s (1/δ) ln²(1/δ)⌉`.
pub const SAMPLE_CONSTANT: f64 = 1.0;

pub fn sample_budget(delta: f64) -> u64 {
    let l = (1.0 / delta).ln();
    ((SAMPLE_CONSTANT * l * l / delta).ceil() as u64).max(1)
}

/// Exact `(1, 4, 0)`-encoding of `ρ/2`: the canonical dilation of `πρ/4`, read as
/// `(4/π, 3, 0)` of `ρ`, down-scaled by `π/2` and renormalized. The ledger records
/// the sample budget for precision `δ`.
pub fn samples_to_block_encoding(rho: &DensityOperator, delta: f64) -> Result<BlockEncoding> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::ParameterOutOfRange(format!("δ = {delta} outside (0, 1)")));
    }
    let mut ledger = QueryLedger::new();
    ledger.add_samples("rho", sample_budget(delta));
    ledger.note("samples_to_block_encoding", "ceil(c_s (1/δ) ln²(1/δ))", &format!("c_s = {SAMPLE_CONSTANT}, δ = {delta}"));
    let base = BlockEncoding::dilation_encode(rho.mat(), 4.0 / PI)?
        .with_ancillas(2)
        .with_ledger(ledger.clone());
    let scaled = down_scale(&base, PI / 2.0)?.rescale(PI / 4.0);
    Ok(scaled.with_ledger(ledger))
}

/// [`samples_to_block_encoding`] with its unitary multiplied by a seeded `e^{iδ′H}`,
/// `‖e^{iδ′H} − I‖ = δ`; the declared error becomes `δ`.
pub fn samples_to_block_encoding_perturbed(rho: &DensityOperator, delta: f64, seed: u64) -> Result<BlockEncoding> {
    let exact = samples_to_block_encoding(rho, delta)?;
    exact.perturb(2.0 * (delta / 2.0).asin(), seed)
}

/// Encoding of the reduced state on the leading `system_qubits` of `V|0⟩`, from a
/// `(β, b, ε)`-encoding of a purifier `V`.
///
/// The block is `tr₂(|ψ⟩⟨ψ|)/β²` with `ψ = β·⟨0|U|0⟩|0⟩`, which is what the
/// swap circuit `(U†⊗I)(I⊗SWAP⊗I)(U⊗I)` yields. Contract `(β², n_V+2b, 2ε+ε²)`.
pub fn density_block_encoding(v: &BlockEncoding, system_qubits: usize) -> Result<BlockEncoding> {
    let nv = v.n();
    if system_qubits == 0 || system_qubits > nv {
        return Err(Error::DimensionMismatch(format!("{system_qubits} system qubits of a {nv}-qubit purifier")));
    }
    let beta = v.alpha();
    let eps = v.epsilon();
    let dim = v.system_dim();
    let target_col = v.target().column(0);
    let tn = norm(&target_col);
    if (tn - 1.0).abs() > 1e-9 {
        return Err(Error::NotPurifier(format!("declared V|0⟩ has norm {tn:.9}")));
    }
    let psi: Vec<C64> = v.block().column(0).iter().map(|z| z * beta).collect();
    let pn = norm(&psi);
    if (pn - 1.0).abs() > eps + 1e-9 {
        return Err(Error::NotPurifier(format!("prepared state has norm {pn:.9}, allowed slack {eps:.3e}")));
    }
    let keep = 1usize << system_qubits;
    let reduce = |x: &[C64]| -> Result<ComplexMatrix> {
        let full = ComplexMatrix::outer(x, x);
        if keep == dim {
            Ok(full)
        } else {
            partial_trace(&full, &[keep, dim / keep], 1)
        }
    };
    let block = reduce(&psi)?.scale_real(1.0 / (beta * beta));
    let target = reduce(&target_col)?;
    let mut ledger = v.ledger().times(2);
    ledger.note("density_block_encoding", "2 uses of the purifier encoding", "");
    // the swap circuit idles n_V ancilla qubits beside the 2b of U and U†
    let a = nv + 2 * v.a();
    BlockEncoding::semantic(&clip(block), system_qubits, a, beta * beta, 2.0 * eps + eps * eps, target, ledger)
}

/// Floor on the accuracy requested from the positive-power polynomial.
pub const POWER_EPS_FLOOR: f64 = 1e-13;

/// `(2, 2n+2a+5, ε)`-encoding of `|ρ⟩⟨ρ|`, the purification `√N(ρ^{1/2}⊗I)G|0⟩`,
/// from a `(β, a, 0)`-encoding of `ρ ⪰ I/κ`.
pub fn purification_encoding(u_rho: &BlockEncoding, kappa: f64, eps: f64) -> Result<BlockEncoding> {
    let beta = u_rho.alpha();
    let n = u_rho.n();
    let nn = u_rho.system_dim() as f64;
    let cap = 1.0 / (4.0 * beta * nn);
    if !(eps > 0.0 && eps < cap) {
        return Err(Error::ParameterOutOfRange(format!("ε = {eps} outside (0, 1/(4βN) = {cap})")));
    }
    if u_rho.epsilon() > 0.0 {
        return Err(Error::ParameterOutOfRange(format!("input encoding must be exact, ε = {}", u_rho.epsilon())));
    }
    if !(kappa >= 1.0) {
        return Err(Error::ParameterOutOfRange(format!("κ = {kappa} < 1")));
    }
    let rho = DensityOperator::new(u_rho.target().clone())?;
    let lmin = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    if lmin < 1.0 / kappa - 1e-12 {
        return Err(Error::RankDeficient(format!("λ_min = {lmin:.3e} < 1/κ = {:.3e}", 1.0 / kappa)));
    }

    let alpha_up = 16.0 * beta * nn;
    let r = crate::polyapprox::upscale_poly(alpha_up, 2.0, eps / 2.0)?;
    let d = r.degree() as f64;
    let eps_in = alpha_up * eps * eps / (256.0 * d * d);
    let eps_poly = (eps_in / (8.0 * (beta * nn).sqrt())).max(POWER_EPS_FLOOR);
    let delta = (1.0 / (beta * kappa)).min(0.25);
    let p = positive_power_poly(delta, eps_poly, 0.5)?;
    let q = scale_poly(&p, 0.5)?;

    // q(ρ/β) ≈ ρ^{1/2}/(4√β)
    let root = matrix_function_real(rho.mat(), |x| x.max(0.0).sqrt() / (4.0 * beta.sqrt()))?;
    let t = poly_eigen_transform(u_rho, &q, 0.0)?.retarget(root)?.extend_identity(n);
    let g = BlockEncoding::from_unitary(&gates::max_entangler(n))?;
    let v = product(&t, &g)?.rescale(4.0 * (beta * nn).sqrt());
    let proj = density_block_encoding(&v, 2 * n)?;
    let out = up_scale(&proj, 2.0, eps / 2.0)?;
    let mut ledger = out.ledger().clone();
    ledger.note(
        "purification_encoding",
        "inner accuracy ε_in = αε²/(256d²), polynomial accuracy max(ε_in/(8√(βN)), 1e-13)",
        &format!("β = {beta}, κ = {kappa}, N = {nn}, d = {}, δ = {delta}", r.degree()),
    );
    let declared = if out.epsilon() <= eps { eps } else { out.epsilon() };
    Ok(out.with_epsilon(declared).with_ledger(ledger))
}

/// `O|b⟩|i⟩ = |b ⊕ xᵢ⟩|i⟩` with the flag qubit first: a `(1, 1, 0)`-encoding of `I − diag(x)`.
pub fn grover_search_oracle(x: &[bool]) -> Result<BlockEncoding> {
    let marked = x.iter().filter(|&&b| b).count();
    if marked != 1 {
        return Err(Error::MarkCountInvalid(format!("{marked} marked indices")));
    }
    let nn = x.len();
    let n = qubits_for(nn).ok_or_else(|| Error::DimensionMismatch(format!("length {nn} is not a power of two")))?;
    let mut o = ComplexMatrix::zeros(2 * nn);
    for (i, &xi) in x.iter().enumerate() {
        for b in 0..2usize {
            let out = b ^ usize::from(xi);
            o[(out * nn + i, b * nn + i)] = C64::new(1.0, 0.0);
        }
    }
    let h = ComplexMatrix::from_real_diag(&x.iter().map(|&b| if b { 0.0 } else { 1.0 }).collect::<Vec<_>>());
    BlockEncoding::from_parts(o, n, 1, 1.0, 0.0, h, QueryLedger::base("search_oracle"))
}
