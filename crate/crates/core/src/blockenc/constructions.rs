//! Constructions on block-encodings, each returning an explicit `(α, a, ε)` contract.
//!
//! `product`, `down_scale`, `lcu` and `roaa` act on the stored unitaries. The
//! polynomial transforms and oracle substitution compute the transformed block
//! and re-materialize it as the canonical dilation; their ledgers carry the
//! query counts a circuit-level realization would pay.

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gates;
use crate::mat::{complete_columns, matrix_function_real, op_norm, qubits_for, ComplexMatrix, C64, ZERO};
use crate::polyapprox::{split_parity, upscale_poly, Parity, PolynomialApprox};
use crate::tolerances::{CERT_SLACK, CONTRACT_SLACK, HERMITIAN_INPUT_TOL};

use super::{sv_transform, BlockEncoding, QueryLedger};

/// Keeps a numerically-contractive block inside the unit ball before dilation.
pub(crate) fn clip(block: ComplexMatrix) -> ComplexMatrix {
    let norm = op_norm(&block);
    if norm > 1.0 {
        block.scale_real(1.0 / norm)
    } else {
        block
    }
}

/// `(U ⊗ I_b)(V ⊗ I_a)`: an `(αβ, a+b, αε_v + βε_u)`-encoding of `AB`.
pub fn product(u: &BlockEncoding, v: &BlockEncoding) -> Result<BlockEncoding> {
    if u.n != v.n {
        return Err(Error::DimensionMismatch(format!("product of {}- and {}-qubit encodings", u.n, v.n)));
    }
    let (au, av, n) = (u.active, v.active, u.n);
    let total = au + av + n;
    let sys = au + av..total;
    let tu: Vec<usize> = (0..au).chain(sys.clone()).collect();
    let tv: Vec<usize> = (au..au + av).chain(sys).collect();
    let core = gates::embed(&u.core, &tu, total).matmul(&gates::embed(&v.core, &tv, total));
    let mut ledger = &u.ledger + &v.ledger;
    ledger.note("product", "q(U) + q(V)", "one use of each factor");
    BlockEncoding::from_parts(
        core,
        n,
        u.a + v.a,
        u.alpha * v.alpha,
        u.alpha * v.epsilon + v.alpha * u.epsilon,
        u.target.matmul(&v.target),
        ledger,
    )
}

/// One extra ancilla rotated by `[[1/f, −s], [s, 1/f]]`: the block shrinks by `f`.
pub fn down_scale(u: &BlockEncoding, factor: f64) -> Result<BlockEncoding> {
    if !(factor > 1.0) || !factor.is_finite() {
        return Err(Error::BadFactor(factor));
    }
    let c = 1.0 / factor;
    let s = (1.0 - c * c).sqrt();
    let rot = ComplexMatrix::from_real(2, &[c, -s, s, c]);
    let mut ledger = u.ledger.clone();
    ledger.note("down_scale", "1 query", "constant 1");
    BlockEncoding::from_parts(
        rot.kron(&u.core),
        u.n,
        u.a + 1,
        u.alpha,
        u.epsilon / factor,
        u.target.scale_real(1.0 / factor),
        ledger,
    )
}

/// Odd singular value transform with `R(x) = (α/β)·x·P(x)`, `P` the rectangle with
/// `δ′ = (β−1)/(2α)` and `t = (β+1)/(2α)`.
///
/// Output contract `(β, a+1, 4βd√(ε/α) + ε′)` with `d = deg R`.
pub fn up_scale(u: &BlockEncoding, beta: f64, eps_prime: f64) -> Result<BlockEncoding> {
    let alpha = u.alpha;
    if !(beta > 1.0 && beta < alpha) {
        return Err(Error::ParameterOutOfRange(format!("up_scale needs 1 < β < α; got β = {beta}, α = {alpha}")));
    }
    let cap = (beta / alpha).min(0.5);
    if !(eps_prime > 0.0 && eps_prime < cap) {
        return Err(Error::ParameterOutOfRange(format!("up_scale needs 0 < ε′ < {cap}; got {eps_prime}")));
    }
    let norm = op_norm(&u.target);
    if norm > 1.0 + CONTRACT_SLACK {
        return Err(Error::ParameterOutOfRange(format!("up_scale needs ‖A‖ ≤ 1; got {norm}")));
    }
    let r = upscale_poly(alpha, beta, eps_prime)?;
    let block = clip(sv_transform(&u.block(), &r)?);
    let d = r.degree() as f64;
    let epsilon = 4.0 * beta * d * (u.epsilon / alpha).sqrt() + eps_prime;
    let uses = upscale_query_count(alpha, beta, eps_prime);
    let mut ledger = u.ledger.times(uses);
    ledger.note(
        "up_scale",
        "ceil((2α/(β−1))·ln(1/ε′))",
        &format!("α = {alpha}, β = {beta}, ε′ = {eps_prime}, deg R = {}", r.degree()),
    );
    BlockEncoding::semantic(&block, u.n, u.a + 1, beta, epsilon, u.target.clone(), ledger)
}

/// `⌈(2α/(β−1))·ln(1/ε′)⌉`, the query count charged by [`up_scale`].
pub fn upscale_query_count(alpha: f64, beta: f64, eps_prime: f64) -> u64 {
    ((2.0 * alpha / (beta - 1.0)) * (1.0 / eps_prime).ln()).ceil() as u64
}

/// Unitaries `P_L`, `P_R` on `b` qubits whose first columns `c`, `d` satisfy
/// `Σ_j |β c̄_j d_j − y_j| ≤ ε₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct StatePreparationPair {
    pl: ComplexMatrix,
    pr: ComplexMatrix,
    beta: f64,
    b: usize,
    epsilon1: f64,
    y: Vec<C64>,
}

fn unitary_with_first_column(col: &[C64]) -> ComplexMatrix {
    let dim = col.len();
    let mut w = ComplexMatrix::zeros(dim);
    w.set_column(0, col);
    let mut filled = vec![false; dim];
    filled[0] = true;
    complete_columns(&mut w, &filled);
    w
}

impl StatePreparationPair {
    pub fn new(pl: ComplexMatrix, pr: ComplexMatrix, beta: f64, y: Vec<C64>, epsilon1: f64) -> Result<Self> {
        if pl.dim() != pr.dim() {
            return Err(Error::DimensionMismatch("P_L and P_R sizes differ".into()));
        }
        let b = qubits_for(pl.dim())
            .ok_or_else(|| Error::DimensionMismatch("pair dimension is not a power of two".into()))?;
        if y.len() > pl.dim() || y.is_empty() {
            return Err(Error::DimensionMismatch(format!("{} coefficients on {b} qubits", y.len())));
        }
        if !pl.is_unitary(1e-9) || !pr.is_unitary(1e-9) {
            return Err(Error::ContractMismatch("pair members must be unitary".into()));
        }
        let pair = Self { pl, pr, beta, b, epsilon1, y };
        let (err, tail) = pair.mismatch();
        if err > epsilon1 + CONTRACT_SLACK || tail > CONTRACT_SLACK {
            return Err(Error::ContractMismatch(format!(
                "pair misses y by {err:.3e} (allowed {epsilon1:.3e}), tail weight {tail:.3e}"
            )));
        }
        Ok(pair)
    }

    /// Exact pair with `β = Σ|y_j|`, `c_j = √(|y_j|/β)` and `d_j = c_j·y_j/|y_j|`.
    pub fn for_coefficients(y: &[C64]) -> Result<Self> {
        let beta: f64 = y.iter().map(|z| z.norm()).sum();
        if y.is_empty() || beta == 0.0 {
            return Err(Error::ParameterOutOfRange("coefficients must not all vanish".into()));
        }
        let dim = y.len().next_power_of_two();
        let mut c = vec![ZERO; dim];
        let mut d = vec![ZERO; dim];
        for (j, z) in y.iter().enumerate() {
            let mag = (z.norm() / beta).sqrt();
            c[j] = C64::new(mag, 0.0);
            d[j] = if z.norm() > 0.0 { z / z.norm() * mag } else { ZERO };
        }
        Self::new(unitary_with_first_column(&c), unitary_with_first_column(&d), beta, y.to_vec(), 0.0)
    }

    /// `(Σ_{j<len y} |β c̄_j d_j − y_j|, Σ_{j≥len y} |c̄_j d_j|)`
    pub fn mismatch(&self) -> (f64, f64) {
        let mut err = 0.0;
        let mut tail = 0.0;
        for j in 0..self.pl.dim() {
            let w = self.pl[(j, 0)].conj() * self.pr[(j, 0)];
            match self.y.get(j) {
                Some(yj) => err += (w * self.beta - yj).norm(),
                None => tail += w.norm(),
            }
        }
        (err, tail)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn epsilon1(&self) -> f64 {
        self.epsilon1
    }

    pub fn y(&self) -> &[C64] {
        &self.y
    }

    pub fn left(&self) -> &ComplexMatrix {
        &self.pl
    }

    pub fn right(&self) -> &ComplexMatrix {
        &self.pr
    }
}

/// `(P_L† ⊗ I)(Σ_j |j⟩⟨j| ⊗ U_j)(P_R ⊗ I)`: an `(αβ, a+b, αε₁ + αβε₂)`-encoding of `Σ y_j A_j`.
pub fn lcu(pair: &StatePreparationPair, encodings: &[BlockEncoding]) -> Result<BlockEncoding> {
    let first = encodings.first().ok_or_else(|| Error::ContractMismatch("no encodings".into()))?;
    if encodings.len() != pair.y.len() {
        return Err(Error::ContractMismatch(format!(
            "{} coefficients for {} encodings",
            pair.y.len(),
            encodings.len()
        )));
    }
    let (n, a, alpha) = (first.n, first.a, first.alpha);
    for e in encodings {
        if e.n != n || e.a != a || (e.alpha - alpha).abs() > 1e-12 * alpha.max(1.0) {
            return Err(Error::ContractMismatch(format!(
                "(n, α, a) = ({}, {}, {}) vs ({n}, {alpha}, {a})",
                e.n, e.alpha, e.a
            )));
        }
    }
    let eps2 = encodings.iter().map(|e| e.epsilon).fold(0.0, f64::max);
    let amax = encodings.iter().map(|e| e.active).max().unwrap_or(0);
    let inner = 1usize << (amax + n);
    let slots = 1usize << pair.b;
    let mut select = ComplexMatrix::zeros(slots * inner);
    for j in 0..slots {
        let blk = match encodings.get(j) {
            Some(e) => ComplexMatrix::identity(1 << (amax - e.active)).kron(&e.core),
            None => ComplexMatrix::identity(inner),
        };
        select.set_block(j * inner, j * inner, &blk);
    }
    let id = ComplexMatrix::identity(inner);
    let core = pair.pl.adjoint().kron(&id).matmul(&select).matmul(&pair.pr.kron(&id));
    let mut target = ComplexMatrix::zeros(1 << n);
    let mut ledger = QueryLedger::new();
    for (e, yj) in encodings.iter().zip(&pair.y) {
        target = &target + &e.target.scale(*yj);
        ledger = &ledger + &e.ledger;
    }
    ledger.add_queries("state_prep_left", 1);
    ledger.add_queries("state_prep_right", 1);
    ledger.note("lcu", "Σ_j q(U_j) + 2", "one use of each term and of each pair unitary");
    BlockEncoding::from_parts(
        core,
        n,
        a + pair.b,
        alpha * pair.beta,
        alpha * pair.epsilon1 + alpha * pair.beta * eps2,
        target,
        ledger,
    )
}

/// `(−1)^k (U R U† R)^k U` with `m = 2k + 1` and `R = 2Π − I`; amplifies an encoding of
/// `sin(π/2m)·W` to an `(1, a+1, 2mε)`-encoding of `W`.
pub fn roaa(u: &BlockEncoding, m: usize) -> Result<BlockEncoding> {
    if m % 2 == 0 {
        return Err(Error::EvenM(m));
    }
    if (u.alpha - 1.0).abs() > 1e-12 {
        return Err(Error::ParameterOutOfRange(format!("amplification needs α = 1, got {}", u.alpha)));
    }
    let s = (std::f64::consts::PI / (2.0 * m as f64)).sin();
    let w = u.target.scale_real(1.0 / s);
    let defect = w.unitarity_defect();
    let allowed = 1e-8 + 3.0 * u.epsilon / s;
    if defect > allowed {
        return Err(Error::NotUnitaryTarget(format!("‖W†W − I‖ = {defect:.3e} > {allowed:.3e}")));
    }
    let k = (m - 1) / 2;
    let dim = u.core.dim();
    let nsys = u.system_dim();
    let refl = ComplexMatrix::from_real_diag(&(0..dim).map(|i| if i < nsys { 1.0 } else { -1.0 }).collect::<Vec<_>>());
    let step = u.core.matmul(&refl).matmul(&u.core.adjoint()).matmul(&refl);
    let mut op = u.core.clone();
    for _ in 0..k {
        op = step.matmul(&op);
    }
    if k % 2 == 1 {
        op = op.scale_real(-1.0);
    }
    let mut ledger = u.ledger.times(m as u64);
    ledger.note("roaa", "m uses of U and U†", &format!("m = {m}"));
    BlockEncoding::from_parts(op, u.n, u.a + 1, 1.0, 2.0 * m as f64 * u.epsilon, w, ledger)
}

/// Replaces every oracle slot of `circuit` by the block of `v`: an
/// `(1, Qa, Qε)`-encoding of the circuit evaluated on the encoded unitary.
pub fn substitute_oracle(circuit: &Circuit, v: &BlockEncoding) -> Result<BlockEncoding> {
    if (v.alpha - 1.0).abs() > 1e-12 {
        return Err(Error::AlphaNotOne(v.alpha));
    }
    if let Some(w) = circuit.oracle_width() {
        if w != v.n {
            return Err(Error::DimensionMismatch(format!("oracle slots of width {w}, encoding on {} qubits", v.n)));
        }
    }
    let q = circuit.query_count();
    let block = circuit.evaluate(&v.block())?;
    let target = circuit.evaluate(&v.target)?;
    let mut ledger = v.ledger.times(q as u64);
    ledger.note("substitute_oracle", "Q uses of the encoding", &format!("Q = {q}"));
    let a = q * v.a;
    let block = if a == 0 { block } else { clip(block) };
    BlockEncoding::semantic(&block, circuit.qubits(), a, 1.0, q as f64 * v.epsilon, target, ledger)
}

/// `p(A/α)` for Hermitian `A` and `|p| ≤ ½`: contract `(1, a+2, 4d√(ε/α) + δ)`.
///
/// The block is `p_even^SV(B) + p_odd^SV(B)` of the stored block `B`, which equals
/// `p(B)` whenever `B` is Hermitian.
pub fn poly_eigen_transform(u: &BlockEncoding, p: &PolynomialApprox, delta: f64) -> Result<BlockEncoding> {
    let defect = u.target.hermitian_defect();
    if defect > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian { defect });
    }
    if p.sup_bound() > 0.5 + CERT_SLACK {
        return Err(Error::PolynomialUnbounded(format!("sup |p| = {:.6} > 1/2", p.sup_bound())));
    }
    let b = u.block();
    let (pe, po) = split_parity(p);
    let mut block = ComplexMatrix::zeros(b.dim());
    for part in [pe, po] {
        if part.coeffs().iter().any(|&c| c != 0.0) {
            block = &block + &sv_transform(&b, &part)?;
        }
    }
    let target = matrix_function_real(&u.target.scale_real(1.0 / u.alpha).hermitian_part(), |x| p.eval(x))?;
    let d = p.degree();
    let epsilon = 4.0 * d as f64 * (u.epsilon / u.alpha).sqrt() + delta;
    let mut ledger = u.ledger.times(d.max(1) as u64);
    ledger.note("poly_eigen_transform", "d uses", &format!("d = {d}"));
    BlockEncoding::semantic(&clip(block), u.n, u.a + 2, 1.0, epsilon, target, ledger)
}

/// `P^SV(A/α)` for a parity-definite `|P| ≤ 1`: contract `(1, a+1, 4d√(ε/α))`.
pub fn sv_transform_parity(u: &BlockEncoding, p: &PolynomialApprox) -> Result<BlockEncoding> {
    if p.parity() == Parity::None {
        return Err(Error::NoParity);
    }
    if p.sup_bound() > 1.0 + CERT_SLACK {
        return Err(Error::PolynomialUnbounded(format!("sup |P| = {:.6} > 1", p.sup_bound())));
    }
    let block = clip(sv_transform(&u.block(), p)?);
    let target = sv_transform(&u.target.scale_real(1.0 / u.alpha), p)?;
    let d = p.degree();
    let epsilon = if u.epsilon > 0.0 { 4.0 * d as f64 * (u.epsilon / u.alpha).sqrt() } else { 0.0 };
    let mut ledger = u.ledger.times(d.max(1) as u64);
    ledger.note("sv_transform_parity", "d uses", &format!("d = {d}"));
    BlockEncoding::semantic(&block, u.n, u.a + 1, 1.0, epsilon, target, ledger)
}
