//! Block-encodings: unitaries whose top-left block, scaled by `α`, approximates a
//! target operator to within a declared error, plus the constructions that
//! combine and transform them.
//!
//! Layout: ancillas come first (most significant), the system register last.
//! Only the ancillas a construction actually entangles are stored in `core`;
//! the remaining declared ancillas are idle and act as identity factors
//! prepended to `core`.

mod ledger;
mod constructions;
mod robust;

pub use ledger::{FormulaNote, QueryLedger};
pub use constructions::{
    down_scale, lcu, poly_eigen_transform, product, roaa, substitute_oracle, sv_transform_parity,
    up_scale, upscale_query_count, StatePreparationPair,
};
pub(crate) use constructions::clip;
pub use robust::{nearest_block_encoding, robustness_bound, svt_robustness_check};

use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::mat::{matrix_function, matrix_function_real, op_norm, qubits_for, ComplexMatrix, C64};
use crate::polyapprox::{divide_by_x, eval_series, Parity, PolynomialApprox};
use crate::random::{unit_hermitian, QRng};
use crate::tolerances::{CONTRACT_SLACK, UNITARY_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct BlockEncoding {
    core: ComplexMatrix,
    n: usize,
    a: usize,
    active: usize,
    alpha: f64,
    epsilon: f64,
    target: ComplexMatrix,
    ledger: QueryLedger,
}

/// `[[M, √(I−MM†)], [√(I−M†M), −M†]]` for a contraction `M`.
pub fn unitary_dilation(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let norm = op_norm(m);
    if norm > 1.0 + CONTRACT_SLACK {
        return Err(Error::NormTooLarge { norm, alpha: 1.0 });
    }
    let n = m.dim();
    let root = |g: ComplexMatrix| matrix_function_real(&g.hermitian_part(), |x| (1.0 - x).max(0.0).sqrt());
    let top = root(m.matmul(&m.adjoint()))?;
    let bottom = root(m.adjoint().matmul(m))?;
    let mut u = ComplexMatrix::zeros(2 * n);
    u.set_block(0, 0, m);
    u.set_block(0, n, &top);
    u.set_block(n, 0, &bottom);
    u.set_block(n, n, &m.adjoint().scale_real(-1.0));
    Ok(u)
}

/// `f^SV(A)` for a parity-definite polynomial: `A·V q(Σ) V†` with `q = f/x` when odd,
/// `V f(Σ) V†` when even, where `A†A = V Σ² V†`.
pub fn sv_transform(a: &ComplexMatrix, p: &PolynomialApprox) -> Result<ComplexMatrix> {
    let g = a.adjoint().matmul(a).hermitian_part();
    match p.parity() {
        Parity::Even => matrix_function_real(&g, |y| p.eval(y.max(0.0).sqrt())),
        Parity::Odd => {
            let q = divide_by_x(p)?;
            let inner = matrix_function_real(&g, |y| eval_series(&q, y.max(0.0).sqrt()))?;
            Ok(a.matmul(&inner))
        }
        Parity::None => Err(Error::NoParity),
    }
}

fn qubits_of(dim: usize, what: &str) -> Result<usize> {
    qubits_for(dim).ok_or_else(|| Error::DimensionMismatch(format!("{what} dimension {dim} is not a power of two")))
}

impl BlockEncoding {
    /// Low-level constructor; checks shapes and unitarity.
    pub fn from_parts(
        core: ComplexMatrix,
        n: usize,
        a: usize,
        alpha: f64,
        epsilon: f64,
        target: ComplexMatrix,
        ledger: QueryLedger,
    ) -> Result<Self> {
        let total = qubits_of(core.dim(), "core")?;
        if total < n || target.dim() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "core on {total} qubits, target of dimension {}, n = {n}",
                target.dim()
            )));
        }
        let active = total - n;
        if active > a {
            return Err(Error::DimensionMismatch(format!("{active} materialized ancillas exceed a = {a}")));
        }
        let defect = core.unitarity_defect();
        if defect > 1e3 * UNITARY_TOL {
            return Err(Error::ConstructionFailed(format!("core is not unitary (defect {defect:.3e})")));
        }
        Ok(Self { core, n, a, active, alpha, epsilon, target, ledger })
    }

    /// Exact `(α, 1, 0)`-encoding of `A` through the canonical dilation of `A/α`.
    pub fn dilation_encode(a: &ComplexMatrix, alpha: f64) -> Result<Self> {
        let n = qubits_of(a.dim(), "target")?;
        let norm = op_norm(a);
        if norm > alpha * (1.0 + CONTRACT_SLACK) {
            return Err(Error::NormTooLarge { norm, alpha });
        }
        let core = unitary_dilation(&a.scale_real(1.0 / alpha))?;
        Self::from_parts(core, n, 1, alpha, 0.0, a.clone(), QueryLedger::new())
    }

    /// A unitary viewed as its own `(1, 0, 0)`-encoding.
    pub fn from_unitary(u: &ComplexMatrix) -> Result<Self> {
        let n = qubits_of(u.dim(), "unitary")?;
        Self::from_parts(u.clone(), n, 0, 1.0, 0.0, u.clone(), QueryLedger::new())
    }

    /// Canonical dilation of a contraction `block`, declared as an `(α, a, ε)`-encoding of `target`.
    pub(crate) fn semantic(
        block: &ComplexMatrix,
        n: usize,
        a: usize,
        alpha: f64,
        epsilon: f64,
        target: ComplexMatrix,
        ledger: QueryLedger,
    ) -> Result<Self> {
        let core = if a == 0 { block.clone() } else { unitary_dilation(block)? };
        Self::from_parts(core, n, a, alpha, epsilon, target, ledger)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn active_ancillas(&self) -> usize {
        self.active
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn target(&self) -> &ComplexMatrix {
        &self.target
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut QueryLedger {
        &mut self.ledger
    }

    /// The unitary on the system and the materialized ancillas.
    pub fn core(&self) -> &ComplexMatrix {
        &self.core
    }

    /// System dimension `N = 2^n`.
    pub fn system_dim(&self) -> usize {
        1 << self.n
    }

    /// `I_{2^idle} ⊗ core`, the full unitary on `n + a` qubits.
    pub fn unitary(&self) -> ComplexMatrix {
        ComplexMatrix::identity(1 << (self.a - self.active)).kron(&self.core)
    }

    /// `⟨0|^{⊗a} U |0⟩^{⊗a}`
    pub fn block(&self) -> ComplexMatrix {
        self.core.top_left(self.system_dim())
    }

    /// `α·⟨0|U|0⟩`
    pub fn scaled_block(&self) -> ComplexMatrix {
        self.block().scale_real(self.alpha)
    }

    /// Measured `‖α⟨0|U|0⟩ − A‖`.
    pub fn residual(&self) -> f64 {
        op_norm(&(&self.scaled_block() - &self.target))
    }

    /// `(residual, residual ≤ ε + slack and U unitary)`.
    pub fn verify(&self) -> (f64, bool) {
        let r = self.residual();
        let unitary = self.core.unitarity_defect() <= 1e3 * UNITARY_TOL;
        (r, unitary && r <= self.epsilon + CONTRACT_SLACK)
    }

    /// Adds `extra` idle ancillas.
    pub fn with_ancillas(mut self, extra: usize) -> Self {
        self.a += extra;
        self
    }

    /// Replaces the declared normalization, target and error. The caller vouches
    /// for the new contract; [`verify`](Self::verify) checks it.
    pub fn relabel(mut self, alpha: f64, target: ComplexMatrix, epsilon: f64) -> Result<Self> {
        if target.dim() != self.system_dim() {
            return Err(Error::DimensionMismatch("relabel target size".into()));
        }
        self.alpha = alpha;
        self.target = target;
        self.epsilon = epsilon;
        Ok(self)
    }

    /// Switches to a new target, paying `‖old − new‖` in the declared error.
    pub fn retarget(mut self, target: ComplexMatrix) -> Result<Self> {
        if target.dim() != self.system_dim() {
            return Err(Error::DimensionMismatch("retarget size".into()));
        }
        self.epsilon += op_norm(&(&self.target - &target));
        self.target = target;
        Ok(self)
    }

    /// The same unitary read as a `(kα, a, kε)`-encoding of `kA`.
    pub fn rescale(mut self, k: f64) -> Self {
        self.alpha *= k;
        self.epsilon *= k;
        self.target = self.target.scale_real(k);
        self
    }

    /// `U ⊗ I_{2^k}`, an encoding of `A ⊗ I` with `k` more system qubits.
    pub fn extend_identity(mut self, k: usize) -> Self {
        let id = ComplexMatrix::identity(1 << k);
        self.core = self.core.kron(&id);
        self.target = self.target.kron(&id);
        self.n += k;
        self
    }

    /// Overrides the declared error; used to build deliberately wrong contracts.
    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    /// Replaces the ledger.
    pub fn with_ledger(mut self, ledger: QueryLedger) -> Self {
        self.ledger = ledger;
        self
    }

    /// `e^{iδH} U` for a seeded unit-norm Hermitian `H`; the declared error grows by
    /// `α·2sin(δ/2) ≥ α‖e^{iδH} − I‖`.
    pub fn perturb(&self, delta: f64, seed: u64) -> Result<Self> {
        let mut rng = QRng::seed_from_u64(seed);
        let h = unit_hermitian(self.core.dim(), &mut rng);
        let kick = matrix_function(&h, |x| C64::from_polar(1.0, delta * x))?;
        let mut out = self.clone();
        out.core = kick.matmul(&self.core);
        out.epsilon += self.alpha * 2.0 * (delta.abs() / 2.0).sin();
        Ok(out)
    }

    /// Versioned text form: header, ledger, target entries, core entries.
    pub fn to_text(&self) -> String {
        let mut s = String::from("qlift-block-encoding v1\n");
        s.push_str(&format!("n {}\na {}\nactive {}\n", self.n, self.a, self.active));
        s.push_str(&format!("alpha {:e}\nepsilon {:e}\n", self.alpha, self.epsilon));
        for (k, v) in &self.ledger.base_queries {
            s.push_str(&format!("query {k} {v}\n"));
        }
        for (k, v) in &self.ledger.samples {
            s.push_str(&format!("sample {k} {v}\n"));
        }
        for note in &self.ledger.formula_notes {
            s.push_str(&format!("note {}|{}|{}\n", note.construction, note.expression, note.constants));
        }
        let mut entries = |name: &str, m: &ComplexMatrix| {
            s.push_str(&format!("{name} {}\n", m.dim()));
            for z in m.data() {
                s.push_str(&format!("{:e} {:e}\n", z.re, z.im));
            }
        };
        entries("target", &self.target);
        entries("core", &self.core);
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse(format!("block-encoding file: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("qlift-block-encoding v1") {
            return Err(bad("missing version header".into()));
        }
        let mut n = None;
        let mut a = None;
        let mut active = None;
        let mut alpha = None;
        let mut epsilon = None;
        let mut ledger = QueryLedger::new();
        let mut target = None;
        let mut core = None;
        while let Some(line) = lines.next() {
            let (key, rest) = line.trim().split_once(' ').ok_or_else(|| bad(format!("line {line:?}")))?;
            let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("integer {s:?}")));
            let real = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("number {s:?}")));
            match key {
                "n" => n = Some(int(rest)?),
                "a" => a = Some(int(rest)?),
                "active" => active = Some(int(rest)?),
                "alpha" => alpha = Some(real(rest)?),
                "epsilon" => epsilon = Some(real(rest)?),
                "query" | "sample" => {
                    let (name, count) = rest.rsplit_once(' ').ok_or_else(|| bad(line.to_string()))?;
                    let count = count.parse::<u64>().map_err(|_| bad(line.to_string()))?;
                    if key == "query" {
                        ledger.add_queries(name, count);
                    } else {
                        ledger.add_samples(name, count);
                    }
                }
                "note" => {
                    let parts: Vec<&str> = rest.splitn(3, '|').collect();
                    if parts.len() != 3 {
                        return Err(bad(line.to_string()));
                    }
                    ledger.note(parts[0], parts[1], parts[2]);
                }
                "target" | "core" => {
                    let dim = int(rest)?;
                    let mut data = Vec::with_capacity(dim * dim);
                    for _ in 0..dim * dim {
                        let l = lines.next().ok_or_else(|| bad("truncated entries".into()))?;
                        let (re, im) = l.trim().split_once(' ').ok_or_else(|| bad(l.to_string()))?;
                        data.push(C64::new(real(re)?, real(im)?));
                    }
                    let m = ComplexMatrix::from_vec(data)?;
                    if key == "target" {
                        target = Some(m);
                    } else {
                        core = Some(m);
                    }
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let missing = |what: &str| bad(format!("missing {what}"));
        let be = Self::from_parts(
            core.ok_or_else(|| missing("core"))?,
            n.ok_or_else(|| missing("n"))?,
            a.ok_or_else(|| missing("a"))?,
            alpha.ok_or_else(|| missing("alpha"))?,
            epsilon.ok_or_else(|| missing("epsilon"))?,
            target.ok_or_else(|| missing("target"))?,
            ledger,
        )?;
        if Some(be.active) != active {
            return Err(bad("active ancilla count disagrees with core size".into()));
        }
        Ok(be)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::random::{random_contraction, seeded_rng};

    #[test]
    fn dilation_of_identity() {
        let be = BlockEncoding::dilation_encode(&ComplexMatrix::identity(2), 1.0).unwrap();
        assert!((&be.block() - &ComplexMatrix::identity(2)).max_abs() < 1e-12);
        assert!(be.verify().1);
    }

    #[test]
    fn dilation_of_half_states() {
        // ⟨0|U|0⟩ amplitudes 1/8 and 3/8 for ½ρ± with ρ± = diag(1/4, 3/4), diag(3/4, 1/4)
        for (p, want) in [(0.25, 0.125), (0.75, 0.375)] {
            let rho = ComplexMatrix::from_real_diag(&[p, 1.0 - p]);
            let be = BlockEncoding::dilation_encode(&rho.scale_real(0.5), 1.0).unwrap();
            assert!((be.unitary()[(0, 0)].re - want).abs() < 1e-12);
        }
    }

    #[test]
    fn random_contractions_extract_exactly() {
        let mut rng = seeded_rng(5);
        for dim in [2, 4, 8] {
            let a = random_contraction(dim, 0.9, &mut rng);
            let be = BlockEncoding::dilation_encode(&a, 1.0).unwrap();
            let (r, ok) = be.verify();
            assert!(ok && r < 1e-10);
        }
        let a = random_contraction(2, 1.5, &mut rng);
        assert!(matches!(BlockEncoding::dilation_encode(&a, 1.0), Err(Error::NormTooLarge { .. })));
    }

    #[test]
    fn perturbation_sweep_and_contract_violation() {
        let be = BlockEncoding::dilation_encode(&gates::pauli_z().scale_real(0.5), 1.0).unwrap();
        let mut last = 0.0;
        for k in 1..=5 {
            let p = be.perturb(0.02 * k as f64, 9).unwrap();
            let (r, ok) = p.verify();
            assert!(ok);
            assert!(r >= last - 1e-12);
            last = r;
        }
        let zeroed = be.perturb(0.1, 9).unwrap().with_epsilon(0.0);
        assert!(!zeroed.verify().1);
    }

    #[test]
    fn idle_ancillas_are_identity_factors() {
        let be = BlockEncoding::dilation_encode(&gates::pauli_x().scale_real(0.3), 1.0).unwrap().with_ancillas(2);
        assert_eq!(be.a(), 3);
        let u = be.unitary();
        assert_eq!(u.dim(), 16);
        assert!((&u.top_left(2) - &be.block()).max_abs() < 1e-15);
        assert!(u.is_unitary(1e-10));
    }

    #[test]
    fn text_round_trip_is_exact() {
        let mut rng = seeded_rng(8);
        let a = random_contraction(4, 0.7, &mut rng);
        let mut be = BlockEncoding::dilation_encode(&a, 1.3).unwrap().with_ancillas(1);
        be.ledger_mut().add_queries("U", 3);
        be.ledger_mut().note("product", "q_u + q_v", "none");
        let back = BlockEncoding::from_text(&be.to_text()).unwrap();
        assert_eq!(back, be);
        assert!(BlockEncoding::from_text("garbage").is_err());
    }

    #[test]
    fn singular_value_transform_parity_cases() {
        let mut rng = seeded_rng(12);
        let h = crate::random::unit_hermitian(4, &mut rng).scale_real(0.8);
        let id = PolynomialApprox::identity();
        assert!((&sv_transform(&h, &id).unwrap() - &h).max_abs() < 1e-12);
        let sq = PolynomialApprox::from_coeffs(vec![0.5, 0.0, 0.5]); // T_2 = 2x² − 1, so this is x²
        let got = sv_transform(&h, &sq).unwrap();
        assert!((&got - &h.matmul(&h)).max_abs() < 1e-12);
    }
}
