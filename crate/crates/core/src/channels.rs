//! Density operators, measurements and channels, with the fidelity and
//! trace-distance calculus used to state the discrimination bounds.

use crate::error::{Error, Result};
use crate::gates;
use crate::mat::{
    basis_vector, herm_eig, kron_vec, matrix_function_real, ComplexMatrix, C64, ONE, ZERO,
};
use crate::random::{haar_state, random_hermitian, seeded_rng};
use crate::tolerances::{CHANNEL_TOL, FIDELITY_EIG_FLOOR, INEQUALITY_SLACK, STATE_TOL};

/// Positive semidefinite, unit-trace operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    mat: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let defect = mat.hermitian_defect();
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!("hermiticity defect {defect:.3e}")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let mat = mat.hermitian_part();
        let lo = herm_eig(&mat)?.eigenvalues[0];
        if lo < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(Self { mat })
    }

    pub fn from_probabilities(p: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(p))
    }

    pub fn pure(psi: &[C64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi, psi))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64) }
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eig(&self.mat).expect("state is Hermitian").eigenvalues
    }

    /// `ρ ⊗ σ`
    pub fn tensor(&self, other: &Self) -> Self {
        Self { mat: self.mat.kron(&other.mat) }
    }

    /// `ρ^{⊗k}`
    pub fn power(&self, k: usize) -> Self {
        let mut m = ComplexMatrix::identity(1);
        for _ in 0..k {
            m = m.kron(&self.mat);
        }
        Self { mat: m }
    }

    /// `U ρ U†`
    pub fn conjugate(&self, u: &ComplexMatrix) -> Self {
        Self { mat: u.matmul(&self.mat).matmul(&u.adjoint()).hermitian_part() }
    }
}

fn check_dims(rho: &DensityOperator, sigma: &DensityOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", rho.dim(), sigma.dim())));
    }
    Ok(())
}

/// Sum of absolute eigenvalues of a Hermitian operator.
pub fn hermitian_trace_norm(a: &ComplexMatrix) -> f64 {
    herm_eig(&a.hermitian_part())
        .expect("Hermitian input")
        .eigenvalues
        .iter()
        .map(|x| x.abs())
        .sum()
}

/// Square root that treats eigenvalues at rounding level as exact zeros.
fn floored_sqrt(x: f64) -> f64 {
    if x > FIDELITY_EIG_FLOOR {
        x.sqrt()
    } else {
        0.0
    }
}

/// `F(ρ, σ) = tr √(√σ ρ √σ)`
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dims(rho, sigma)?;
    let sq = matrix_function_real(sigma.mat(), floored_sqrt)?;
    let m = sq.matmul(rho.mat()).matmul(&sq).hermitian_part();
    Ok(herm_eig(&m)?.eigenvalues.iter().map(|&x| floored_sqrt(x)).sum())
}

/// `γ = 1 − F(ρ, σ)`, clamped to `[0, 1]`.
pub fn infidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    Ok((1.0 - fidelity(rho, sigma)?).clamp(0.0, 1.0))
}

/// `½‖ρ − σ‖₁`
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dims(rho, sigma)?;
    Ok(0.5 * hermitian_trace_norm(&(rho.mat() - sigma.mat())))
}

/// Whether `1 − F ≤ ½‖ρ − σ‖₁ ≤ √(1 − F²)` holds within the shared slack.
pub fn fuchs_van_de_graaf_check(rho: &DensityOperator, sigma: &DensityOperator) -> Result<bool> {
    let f = fidelity(rho, sigma)?;
    let d = trace_distance(rho, sigma)?;
    let upper = (1.0 - f * f).max(0.0).sqrt();
    Ok(1.0 - f <= d + INEQUALITY_SLACK && d <= upper + INEQUALITY_SLACK)
}

/// Positive operator-valued measure.
#[derive(Clone, Debug)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = elements
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty POVM".into()))?
            .dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for e in &elements {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch("POVM element sizes differ".into()));
            }
            if herm_eig(e)?.eigenvalues[0] < -CHANNEL_TOL {
                return Err(Error::InvalidChannel("POVM element is not PSD".into()));
            }
            sum = &sum + e;
        }
        let defect = (&sum - &ComplexMatrix::identity(dim)).frobenius_norm();
        if defect > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!("POVM sums to I only within {defect:.3e}")));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `tr(Λ_k ρ)`
    pub fn probability(&self, k: usize, rho: &DensityOperator) -> f64 {
        self.elements[k].matmul(rho.mat()).trace().re
    }

    /// `½ tr(Λ₀ρ₀) + ½ tr(Λ₁ρ₁)` for a two-outcome measurement.
    pub fn success_probability(&self, rho0: &DensityOperator, rho1: &DensityOperator) -> f64 {
        0.5 * self.probability(0, rho0) + 0.5 * self.probability(1, rho1)
    }
}

/// Optimal two-outcome measurement: projector onto the positive part of `ρ₀ − ρ₁`.
pub fn helstrom_measure(rho0: &DensityOperator, rho1: &DensityOperator) -> Result<(Povm, f64)> {
    check_dims(rho0, rho1)?;
    let diff = (rho0.mat() - rho1.mat()).hermitian_part();
    let eig = herm_eig(&diff)?;
    let lambda0 = eig.apply(|x| if x > 0.0 { ONE } else { ZERO });
    let lambda1 = &ComplexMatrix::identity(diff.dim()) - &lambda0;
    let norm1: f64 = eig.eigenvalues.iter().map(|x| x.abs()).sum();
    let povm = Povm::new(vec![lambda0, lambda1])?;
    Ok((povm, 0.5 * (1.0 + 0.5 * norm1)))
}

/// Number of copies any discriminator needs, `1/(72γ)`.
pub fn sample_lower_bound_dis(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let g = infidelity(rho, sigma)?;
    if g < 1e-12 {
        return Err(Error::DegenerateInstance(g));
    }
    Ok(1.0 / (72.0 * g))
}

/// `√N (ρ^{1/2} ⊗ I) G |0⟩`; the first register carries `ρ`.
pub fn purify(rho: &DensityOperator) -> Vec<C64> {
    let n = rho.dim();
    let sqrt_rho = matrix_function_real(rho.mat(), |x| x.max(0.0).sqrt()).expect("state is Hermitian");
    // G|0⟩ = N^{-1/2} Σ_j |j⟩|j⟩; computed directly for any dimension.
    let mut omega = vec![ZERO; n * n];
    for j in 0..n {
        omega[j * n + j] = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    }
    let op = sqrt_rho.kron(&ComplexMatrix::identity(n));
    op.mul_vec(&omega).iter().map(|z| z * (n as f64).sqrt()).collect()
}

/// `S₂(ρ) = −ln tr(ρ²)`
pub fn renyi2_entropy(rho: &DensityOperator) -> f64 {
    let purity = rho.mat().matmul(rho.mat()).trace().re;
    -purity.max(1e-300).ln()
}

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?
            .dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for k in &kraus {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch("Kraus operator sizes differ".into()));
            }
            sum = &sum + &k.adjoint().matmul(k);
        }
        let defect = (&sum - &ComplexMatrix::identity(dim)).frobenius_norm();
        if defect > CHANNEL_TOL {
            return Err(Error::InvalidChannel(format!("Σ K†K deviates from I by {defect:.3e}")));
        }
        Ok(Self { kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self { kraus: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn unitary(u: &ComplexMatrix) -> Result<Self> {
        Self::new(vec![u.clone()])
    }

    /// Qubit-agnostic depolarizing map `ρ ↦ (1 − p)ρ + p I/d`.
    pub fn depolarizing(dim: usize, p: f64) -> Result<Self> {
        // Kraus form from the Choi matrix of the map.
        let id = Self::identity(dim).superoperator();
        let mut s = id.scale_real(1.0 - p);
        for i in 0..dim {
            for j in 0..dim {
                let col = i * dim + i;
                s[(j * dim + j, col)] += C64::new(p / dim as f64, 0.0);
            }
        }
        Self::from_superoperator(&s, dim)
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].dim()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `Σ K X K†` on an arbitrary operator.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim());
        for k in &self.kraus {
            out = &out + &k.matmul(x).matmul(&k.adjoint());
        }
        out
    }

    /// `(E ⊗ id)(X)` with an ancilla of dimension `anc` after the system.
    pub fn apply_with_ancilla(&self, x: &ComplexMatrix, anc: usize) -> ComplexMatrix {
        let id = ComplexMatrix::identity(anc);
        let mut out = ComplexMatrix::zeros(x.dim());
        for k in &self.kraus {
            let kk = k.kron(&id);
            out = &out + &kk.matmul(x).matmul(&kk.adjoint());
        }
        out
    }

    /// Transfer matrix acting on row-major `vec(ρ)`: `Σ K ⊗ K̄`.
    pub fn superoperator(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut s = ComplexMatrix::zeros(d * d);
        for k in &self.kraus {
            let kc = ComplexMatrix::from_fn(d, |i, j| k[(i, j)].conj());
            s = &s + &k.kron(&kc);
        }
        s
    }

    /// Kraus operators from a transfer matrix via the Choi matrix.
    pub fn from_superoperator(s: &ComplexMatrix, dim: usize) -> Result<Self> {
        if s.dim() != dim * dim {
            return Err(Error::DimensionMismatch("superoperator size".into()));
        }
        // J_{(i,k),(j,l)} = E(|i⟩⟨j|)_{kl} = S[(k,l),(i,j)]
        let choi = ComplexMatrix::from_fn(dim * dim, |r, c| {
            let (i, k) = (r / dim, r % dim);
            let (j, l) = (c / dim, c % dim);
            s[(k * dim + l, i * dim + j)]
        });
        let eig = herm_eig(&choi.hermitian_part())?;
        let mut kraus = Vec::new();
        for (m, &lam) in eig.eigenvalues.iter().enumerate() {
            if lam <= 1e-14 {
                continue;
            }
            let v = eig.eigenvectors.column(m);
            let sl = lam.sqrt();
            kraus.push(ComplexMatrix::from_fn(dim, |k, i| v[i * dim + k] * sl));
        }
        Self::new(kraus)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let s = self.superoperator().matmul(&other.superoperator());
        Self::from_superoperator(&s, self.dim())
    }

    /// `r`-fold composition.
    pub fn power(&self, r: usize) -> Result<Self> {
        let d = self.dim();
        let mut base = self.superoperator();
        let mut acc = ComplexMatrix::identity(d * d);
        let mut e = r;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base);
            }
            base = base.matmul(&base);
            e >>= 1;
        }
        Self::from_superoperator(&acc, d)
    }
}

pub fn channel_apply(e: &QuantumChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    if e.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!("channel {} vs state {}", e.dim(), rho.dim())));
    }
    DensityOperator::new(e.apply_matrix(rho.mat()))
}

fn check_channels(e: &QuantumChannel, f: &QuantumChannel) -> Result<()> {
    if e.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!("channels {} vs {}", e.dim(), f.dim())));
    }
    Ok(())
}

fn entangled_input(d: usize) -> ComplexMatrix {
    let mut omega = vec![ZERO; d * d];
    for j in 0..d {
        omega[j * d + j] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    ComplexMatrix::outer(&omega, &omega)
}

fn pure_gap(e: &QuantumChannel, f: &QuantumChannel, psi: &[C64]) -> f64 {
    let x = ComplexMatrix::outer(psi, psi);
    hermitian_trace_norm(&(&e.apply_matrix(&x) - &f.apply_matrix(&x)))
}

fn entangled_gap(e: &QuantumChannel, f: &QuantumChannel, x: &ComplexMatrix) -> f64 {
    let d = e.dim();
    hermitian_trace_norm(&(&e.apply_with_ancilla(x, d) - &f.apply_with_ancilla(x, d)))
}

/// Number of Haar-random inputs in the trace-distance search set.
pub const HAAR_INPUTS: usize = 500;
/// Number of random Hermitian probes whose eigenvectors join the search set.
pub const HERMITIAN_PROBES: usize = 20;

/// Lower estimate of `sup_ϱ ‖E(ϱ) − F(ϱ)‖₁` over a seeded search set of system-only
/// inputs: basis states, eigenvectors of random Hermitian probes and Haar-random
/// pure states. The true supremum needs a semidefinite program; the value returned
/// never exceeds it. Ancilla-enlarged inputs live in [`channel_diamond_lb`].
pub fn channel_trace_distance(e: &QuantumChannel, f: &QuantumChannel, seed: u64) -> Result<f64> {
    check_channels(e, f)?;
    let d = e.dim();
    let mut rng = seeded_rng(seed);
    let mut best: f64 = 0.0;
    for k in 0..d {
        best = best.max(pure_gap(e, f, &basis_vector(d, k)));
    }
    for _ in 0..HERMITIAN_PROBES {
        let h = random_hermitian(d, &mut rng);
        let eig = herm_eig(&h)?;
        for k in 0..d {
            best = best.max(pure_gap(e, f, &eig.eigenvectors.column(k)));
        }
    }
    for _ in 0..HAAR_INPUTS {
        best = best.max(pure_gap(e, f, &haar_state(d, &mut rng)));
    }
    Ok(best)
}

/// Lower bound on the diamond distance: the trace-distance search set plus
/// ancilla-enlarged inputs (maximally entangled and Haar-random on the doubled system).
pub fn channel_diamond_lb(e: &QuantumChannel, f: &QuantumChannel, seed: u64) -> Result<f64> {
    let mut best = channel_trace_distance(e, f, seed)?;
    let d = e.dim();
    let mut rng = seeded_rng(seed ^ 0x5eed_d1a0);
    best = best.max(entangled_gap(e, f, &entangled_input(d)));
    for _ in 0..(HAAR_INPUTS / 5) {
        let psi = haar_state(d * d, &mut rng);
        best = best.max(entangled_gap(e, f, &ComplexMatrix::outer(&psi, &psi)));
    }
    Ok(best)
}

/// Pure product state `|a⟩|b⟩` helper used by tests and testers.
pub fn product_state(a: &[C64], b: &[C64]) -> Vec<C64> {
    kron_vec(a, b)
}

/// Qubit projective measurement onto the Bloch direction `(θ, φ)` and its complement.
pub fn bloch_projector(theta: f64, phi: f64) -> ComplexMatrix {
    let psi = [
        C64::new((theta / 2.0).cos(), 0.0),
        C64::from_polar((theta / 2.0).sin(), phi),
    ];
    ComplexMatrix::outer(&psi, &psi)
}

/// Best success probability over a grid of `points` projective qubit measurements
/// spread over the Bloch sphere (Fibonacci lattice).
pub fn qubit_measurement_grid_best(rho0: &DensityOperator, rho1: &DensityOperator, points: usize) -> f64 {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut best: f64 = 0.0;
    for k in 0..points {
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / points as f64;
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = golden * k as f64;
        let p = bloch_projector(theta, phi);
        let q = &ComplexMatrix::identity(2) - &p;
        let s = 0.5 * p.matmul(rho0.mat()).trace().re + 0.5 * q.matmul(rho1.mat()).trace().re;
        best = best.max(s);
    }
    best
}

/// Pauli-basis helper: `(I + x X + y Y + z Z)/2`.
pub fn bloch_state(x: f64, y: f64, z: f64) -> Result<DensityOperator> {
    let m = &(&ComplexMatrix::identity(2) + &gates::pauli_x().scale_real(x))
        + &(&gates::pauli_y().scale_real(y) + &gates::pauli_z().scale_real(z));
    DensityOperator::new(m.scale_real(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::partial_trace;
    use crate::random::{haar_unitary, random_density};

    fn diag(p: &[f64]) -> DensityOperator {
        DensityOperator::from_probabilities(p).unwrap()
    }

    #[test]
    fn fidelity_values() {
        let a = diag(&[0.25, 0.75]);
        let b = diag(&[0.75, 0.25]);
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let f = fidelity(&a, &b).unwrap();
        assert!((f - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((f - 0.86603).abs() < 1e-5);
        let half = DensityOperator::maximally_mixed(2);
        let f2 = fidelity(&half, &a).unwrap();
        assert!((f2 - ((0.125f64).sqrt() + (0.375f64).sqrt())).abs() < 1e-12);
        assert!((f2 - 0.96593).abs() < 1e-5);
    }

    #[test]
    fn infidelity_values() {
        let a = diag(&[0.25, 0.75]);
        let b = diag(&[0.75, 0.25]);
        assert!((infidelity(&a, &b).unwrap() - 0.13397).abs() < 1e-5);
        let g = infidelity(&DensityOperator::maximally_mixed(2), &a).unwrap();
        assert!((g - 0.03407).abs() < 1e-5);
        assert!(g <= 2.0 / 16.0);
    }

    #[test]
    fn trace_distance_of_z_pair() {
        let plus = bloch_state(0.0, 0.0, 0.1).unwrap();
        let minus = bloch_state(0.0, 0.0, -0.1).unwrap();
        assert!((trace_distance(&plus, &minus).unwrap() - 0.1).abs() < 1e-12);
        assert!(fuchs_van_de_graaf_check(&plus, &plus).unwrap());
    }

    #[test]
    fn helstrom_values() {
        let a = diag(&[0.25, 0.75]);
        let b = diag(&[0.75, 0.25]);
        let (_, p) = helstrom_measure(&a, &a).unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        let (povm, p) = helstrom_measure(&a, &b).unwrap();
        assert!((p - 0.75).abs() < 1e-12);
        assert!((povm.success_probability(&a, &b) - p).abs() < 1e-12);
    }

    #[test]
    fn helstrom_unitary_invariance() {
        let mut rng = seeded_rng(21);
        let a = random_density(3, 3, &mut rng);
        let b = random_density(3, 2, &mut rng);
        let u = haar_unitary(3, &mut rng);
        let (_, p) = helstrom_measure(&a, &b).unwrap();
        let (_, q) = helstrom_measure(&a.conjugate(&u), &b.conjugate(&u)).unwrap();
        assert!((p - q).abs() < 1e-9);
    }

    #[test]
    fn sample_bound_values() {
        let a = diag(&[0.25, 0.75]);
        let b = diag(&[0.75, 0.25]);
        let s = sample_lower_bound_dis(&a, &b).unwrap();
        assert!((s - 1.0 / (72.0 * 0.1339746)).abs() < 1e-5);
        assert!(matches!(sample_lower_bound_dis(&a, &a), Err(Error::DegenerateInstance(_))));
    }

    #[test]
    fn helstrom_on_copies_respects_fidelity_bound() {
        let a = diag(&[0.25, 0.75]);
        let b = diag(&[0.6, 0.4]);
        let f = fidelity(&a, &b).unwrap();
        for s in 1..=6 {
            let (_, p) = helstrom_measure(&a.power(s), &b.power(s)).unwrap();
            let bound = 0.5 * (1.0 + (1.0 - f.powi(2 * s as i32)).sqrt());
            assert!(p <= bound + 1e-12, "S = {s}: {p} > {bound}");
        }
    }

    #[test]
    fn purification_reduces_to_input() {
        let pure = DensityOperator::pure(&basis_vector(2, 0)).unwrap();
        let v = purify(&pure);
        assert!((v[0].norm() - 1.0).abs() < 1e-12);

        let v = purify(&DensityOperator::maximally_mixed(2));
        let h = 0.5f64.sqrt();
        assert!((v[0].re - h).abs() < 1e-12 && (v[3].re - h).abs() < 1e-12);

        let a = diag(&[0.25, 0.75]);
        let v = purify(&a);
        let red = partial_trace(&ComplexMatrix::outer(&v, &v), &[2, 2], 1).unwrap();
        assert!((&red - a.mat()).max_abs() < 1e-10);
    }

    #[test]
    fn renyi_values() {
        assert!(renyi2_entropy(&DensityOperator::pure(&basis_vector(2, 1)).unwrap()).abs() < 1e-12);
        assert!((renyi2_entropy(&DensityOperator::maximally_mixed(2)) - 2f64.ln()).abs() < 1e-12);
        assert!((renyi2_entropy(&diag(&[0.25, 0.75])) - 0.47000).abs() < 1e-5);
    }

    #[test]
    fn channel_distances() {
        let id = QuantumChannel::identity(2);
        assert_eq!(channel_trace_distance(&id, &id, 1).unwrap(), 0.0);
        let u = haar_unitary(2, &mut seeded_rng(2));
        let e = QuantumChannel::unitary(&u).unwrap();
        let f = QuantumChannel::unitary(&u.scale(C64::from_polar(1.0, 0.7))).unwrap();
        assert!(channel_trace_distance(&e, &f, 1).unwrap() < 1e-12);
        let p = 0.3;
        let dep = QuantumChannel::depolarizing(2, p).unwrap();
        let d = channel_trace_distance(&dep, &id, 4).unwrap();
        assert!(d <= p + 1e-12 && d >= p - 1e-9, "depolarizing distance {d}");
        let lb = channel_diamond_lb(&dep, &id, 4).unwrap();
        assert!(lb >= d - 1e-12);
        // maximally entangled input: p·‖I/4 − Φ‖₁ = 3p/2
        assert!((lb - 1.5 * p).abs() < 1e-9);
    }

    #[test]
    fn superoperator_round_trip() {
        let dep = QuantumChannel::depolarizing(2, 0.2).unwrap();
        let twice = dep.power(2).unwrap();
        let rho = diag(&[1.0, 0.0]);
        let out = channel_apply(&twice, &rho).unwrap();
        // (1-p)^2 shrinkage of the Bloch vector.
        assert!((out.mat()[(0, 0)].re - (0.5 + 0.5 * 0.64)).abs() < 1e-12);
    }
}
