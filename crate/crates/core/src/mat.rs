//! Dense complex matrices over `Complex64` and the Hermitian eigensolver that
//! every matrix function, norm and singular value routine is built on.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::{HERMITIAN_INPUT_TOL, JACOBI_OFF_DIAG, SINGULAR_FLOOR};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim.min(8) {
            let row: Vec<String> = (0..self.dim.min(8))
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be a perfect square.
    pub fn from_vec(data: Vec<C64>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form a square matrix",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    /// Real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), dim * dim, "expected {} entries", dim * dim);
        Self { dim, data: entries.iter().map(|&x| C64::new(x, 0.0)).collect() }
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// `|u⟩⟨v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len());
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.dim, v.len(), "matrix-vector dimension mismatch");
        let n = self.dim;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(ZERO, |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Frobenius norm of `A − A†`, an upper bound on its operator norm.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Operator-norm distance of `A†A` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint().matmul(self);
        op_norm(&(&g - &Self::identity(self.dim)))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Top-left `n × n` block.
    pub fn top_left(&self, n: usize) -> Self {
        self.block(0, 0, n)
    }

    pub fn block(&self, r0: usize, c0: usize, n: usize) -> Self {
        assert!(r0 + n <= self.dim && c0 + n <= self.dim, "block out of range");
        Self::from_fn(n, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        assert!(r0 + b.dim <= self.dim && c0 + b.dim <= self.dim, "block out of range");
        for i in 0..b.dim {
            for j in 0..b.dim {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Kronecker product `self ⊗ other`; `self` acts on the more significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.dim, other.dim);
        let d = n * m;
        let mut out = vec![ZERO; d * d];
        for i in 0..n {
            for j in 0..n {
                let a = self.data[i * n + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k) * d + j * m + l] = a * other.data[k * m + l];
                    }
                }
            }
        }
        Self { dim: d, data: out }
    }

    /// Direct sum `self ⊕ other` (block diagonal).
    pub fn direct_sum(&self, other: &Self) -> Self {
        let d = self.dim + other.dim;
        let mut m = Self::zeros(d);
        m.set_block(0, 0, self);
        m.set_block(self.dim, self.dim, other);
        m
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// Eigendecomposition `A = V diag(λ) V†` with ascending eigenvalues.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| C64::new(x, 0.0))
    }

    /// `V f(D) V†`
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let fd: Vec<C64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = ZERO;
                for k in 0..n {
                    if fd[k] != ZERO {
                        s += v[(i, k)] * fd[k] * v[(j, k)].conj();
                    }
                }
                out[(i, j)] = s;
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_INPUT_TOL || !a.is_finite() {
        return Err(Error::NotHermitian { defect });
    }
    let n = a.dim();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(1.0);
    let threshold = JACOBI_OFF_DIAG * n as f64 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += m[(i, j)].norm_sqr();
                }
            }
        }
        if off.sqrt() < threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r < 1e-300 {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let em = phase.conj(); // e^{-iφ}
                let ep = phase;
                // M ← M G
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c - em * mkq * s;
                    m[(k, q)] = mkp * s + em * mkq * c;
                }
                // M ← G† M
                for k in 0..n {
                    let xpk = m[(p, k)];
                    let xqk = m[(q, k)];
                    m[(p, k)] = xpk * c - ep * xqk * s;
                    m[(q, k)] = xpk * s + ep * xqk * c;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
                // V ← V G
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - em * vkq * s;
                    v[(k, q)] = vkp * s + em * vkq * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps ties in rotation-sweep column order.
    order.sort_by(|&x, &y| m[(x, x)].re.partial_cmp(&m[(y, y)].re).unwrap());
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { eigenvalues, eigenvectors })
}

/// `f(A)` for Hermitian `A`.
pub fn matrix_function(a: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    Ok(herm_eig(a)?.apply(f))
}

/// Real-valued variant of [`matrix_function`]; the result is Hermitian.
pub fn matrix_function_real(a: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    Ok(herm_eig(a)?.apply(|x| C64::new(f(x), 0.0)))
}

/// `A ⊗ B`
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Traces out subsystem `traced` of a multipartite operator with local dimensions `dims`
/// (listed most significant first).
pub fn partial_trace(a: &ComplexMatrix, dims: &[usize], traced: usize) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if total != a.dim() || traced >= dims.len() || dims.iter().any(|&d| d == 0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {:?} (tracing {}) vs matrix dimension {}",
            dims,
            traced,
            a.dim()
        )));
    }
    let outer: usize = dims[..traced].iter().product();
    let mid = dims[traced];
    let inner: usize = dims[traced + 1..].iter().product();
    let out_dim = outer * inner;
    let mut out = ComplexMatrix::zeros(out_dim);
    for o1 in 0..outer {
        for i1 in 0..inner {
            for o2 in 0..outer {
                for i2 in 0..inner {
                    let mut s = ZERO;
                    for k in 0..mid {
                        let r = (o1 * mid + k) * inner + i1;
                        let c = (o2 * mid + k) * inner + i2;
                        s += a[(r, c)];
                    }
                    out[(o1 * inner + i1, o2 * inner + i2)] = s;
                }
            }
        }
    }
    Ok(out)
}

/// Singular values in descending order, read off the eigenvalues `±σ` of the
/// Hermitian dilation `[[0, A], [A†, 0]]`.
///
/// Going through `A†A` would square the rounding floor, leaving zero singular
/// values near `1e-8`.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut h = ComplexMatrix::zeros(2 * n);
    h.set_block(0, n, a);
    h.set_block(n, 0, &a.adjoint());
    let eig = herm_eig(&h).expect("dilation is Hermitian");
    eig.eigenvalues.iter().rev().take(n).map(|&x| x.max(0.0)).collect()
}

pub fn op_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).iter().sum()
}

/// Thin singular value decomposition `A = W diag(σ) V†` where `V` diagonalizes `A†A`.
///
/// Left vectors for singular values below `1e-7` are an orthonormal completion,
/// which is harmless for every consumer here because those directions carry
/// weight at most `1e-7` and are only used inside square-root-regular expressions.
#[derive(Clone, Debug)]
pub struct Svd {
    pub left: ComplexMatrix,
    /// Eigenvalues of `A†A` (squared singular values), ascending, clamped at zero.
    pub sigma_sq: Vec<f64>,
    pub right: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    let n = a.dim();
    let g = a.adjoint().matmul(a);
    let eig = herm_eig(&g).expect("A†A is Hermitian");
    let v = eig.eigenvectors;
    let sigma_sq: Vec<f64> = eig.eigenvalues.iter().map(|&x| x.max(0.0)).collect();
    let mut w = ComplexMatrix::zeros(n);
    let mut filled = vec![false; n];
    for j in 0..n {
        let s = sigma_sq[j].sqrt();
        if s > 1e-7 {
            let col: Vec<C64> = a.mul_vec(&v.column(j)).iter().map(|z| z / s).collect();
            w.set_column(j, &col);
            filled[j] = true;
        }
    }
    complete_columns(&mut w, &filled);
    Svd { left: w, sigma_sq, right: v }
}

/// Fills the columns not marked in `filled` with an orthonormal completion.
pub fn complete_columns(w: &mut ComplexMatrix, filled: &[bool]) {
    let n = w.dim();
    let mut basis: Vec<Vec<C64>> = (0..n).filter(|&j| filled[j]).map(|j| w.column(j)).collect();
    let mut candidates: Vec<usize> = (0..n).collect();
    for j in 0..n {
        if filled[j] {
            continue;
        }
        // Pick the standard basis vector with the largest residual.
        let mut best: Option<(f64, Vec<C64>, usize)> = None;
        for (ci, &e) in candidates.iter().enumerate() {
            let mut x = vec![ZERO; n];
            x[e] = ONE;
            for _ in 0..2 {
                for b in &basis {
                    let proj = inner(b, &x);
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi -= proj * bi;
                    }
                }
            }
            let nx = norm(&x);
            if best.as_ref().map_or(true, |(bn, _, _)| nx > *bn) {
                best = Some((nx, x, ci));
            }
        }
        let (nx, x, ci) = best.expect("completion candidate");
        candidates.remove(ci);
        let col: Vec<C64> = x.iter().map(|z| z / nx).collect();
        w.set_column(j, &col);
        basis.push(col);
    }
}

/// Closest unitary in operator norm: the polar factor `A (A†A)^{-1/2}`.
pub fn closest_unitary(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let g = a.adjoint().matmul(a);
    let eig = herm_eig(&g)?;
    let smin = eig.eigenvalues[0].max(0.0).sqrt();
    if smin < SINGULAR_FLOOR {
        return Err(Error::Singular(smin));
    }
    let inv_sqrt = eig.apply(|x| C64::new(1.0 / x.sqrt(), 0.0));
    Ok(a.matmul(&inv_sqrt))
}

/// `⟨u|v⟩`
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(v: &[C64]) -> Vec<C64> {
    let n = norm(v);
    v.iter().map(|z| z / n).collect()
}

pub fn basis_vector(dim: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[i] = ONE;
    v
}

pub fn kron_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for &a in u {
        for &b in v {
            out.push(a * b);
        }
    }
    out
}

/// Number of qubits for a power-of-two dimension.
pub fn qubits_for(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::random::{random_hermitian, seeded_rng};

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let d = op_norm(&(a - b));
        assert!(d <= tol, "distance {d:e} > {tol:e}");
    }

    #[test]
    fn pauli_z_spectrum() {
        let e = herm_eig(&gates::pauli_z()).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum_and_vectors() {
        let e = herm_eig(&gates::pauli_x()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        let minus = e.eigenvectors.column(0);
        // |−⟩ up to phase
        let overlap = inner(&minus, &[C64::new(0.5f64.sqrt(), 0.0), C64::new(-(0.5f64.sqrt()), 0.0)]);
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = seeded_rng(11);
        for dim in [2, 8, 16, 64] {
            let a = random_hermitian(dim, &mut rng);
            let e = herm_eig(&a).unwrap();
            assert_close(&e.reconstruct(), &a, 1e-10 * dim as f64);
            let v = &e.eigenvectors;
            assert_close(&v.adjoint().matmul(v), &ComplexMatrix::identity(dim), 1e-10);
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = ComplexMatrix::zeros(2);
        a[(0, 1)] = ONE;
        assert!(matches!(herm_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn square_function_matches_product() {
        let mut rng = seeded_rng(3);
        let a = random_hermitian(8, &mut rng);
        let sq = matrix_function_real(&a, |x| x * x).unwrap();
        assert_close(&sq, &a.matmul(&a), 1e-10);
        let id = matrix_function_real(&a, |x| x).unwrap();
        assert_close(&id, &a, 1e-10);
    }

    #[test]
    fn exponential_homomorphism() {
        let mut rng = seeded_rng(5);
        let a = random_hermitian(6, &mut rng);
        let s = 0.3;
        let e1 = matrix_function(&a, |x| (I * s * x).exp()).unwrap();
        let e2 = matrix_function(&a, |x| (I * 2.0 * s * x).exp()).unwrap();
        assert_close(&e1.matmul(&e1), &e2, 1e-9);
    }

    #[test]
    fn tensor_z_identity_spectrum() {
        let zi = tensor(&gates::pauli_z(), &ComplexMatrix::identity(2));
        let e = herm_eig(&zi).unwrap();
        for (got, want) in e.eigenvalues.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn partial_trace_cases() {
        let mut p00 = ComplexMatrix::zeros(4);
        p00[(0, 0)] = ONE;
        let r = partial_trace(&p00, &[2, 2], 1).unwrap();
        assert_close(&r, &ComplexMatrix::from_real_diag(&[1.0, 0.0]), 1e-15);

        let h = 0.5f64.sqrt();
        let bell = [C64::new(h, 0.0), ZERO, ZERO, C64::new(h, 0.0)];
        let r = partial_trace(&ComplexMatrix::outer(&bell, &bell), &[2, 2], 1).unwrap();
        assert_close(&r, &ComplexMatrix::identity(2).scale_real(0.5), 1e-15);

        assert!(partial_trace(&p00, &[2, 3], 0).is_err());
    }

    #[test]
    fn norms_of_pauli_z() {
        let z = gates::pauli_z();
        assert!((op_norm(&z) - 1.0).abs() < 1e-14);
        assert!((trace_norm(&z) - 2.0).abs() < 1e-14);
        let eps = 0.1;
        assert!((trace_norm(&z.scale_real(eps)) - 2.0 * eps).abs() < 1e-14);
        let zero = ComplexMatrix::zeros(3);
        assert_eq!(op_norm(&zero), 0.0);
        assert_eq!(trace_norm(&zero), 0.0);
    }

    #[test]
    fn closest_unitary_cases() {
        let two = ComplexMatrix::identity(3).scale_real(2.0);
        assert_close(&closest_unitary(&two).unwrap(), &ComplexMatrix::identity(3), 1e-12);
        let h = gates::hadamard();
        assert_close(&closest_unitary(&h).unwrap(), &h, 1e-10);
        assert!(matches!(closest_unitary(&ComplexMatrix::zeros(2)), Err(Error::Singular(_))));
    }

    #[test]
    fn svd_reconstructs_rank_deficient() {
        let mut rng = seeded_rng(9);
        let a = random_hermitian(4, &mut rng);
        let p = ComplexMatrix::from_real_diag(&[1.0, 0.0, 1.0, 0.0]);
        let b = a.matmul(&p);
        let s = svd(&b);
        let sig: Vec<C64> = s.sigma_sq.iter().map(|x| C64::new(x.sqrt(), 0.0)).collect();
        let rec = s.left.matmul(&ComplexMatrix::from_diag(&sig)).matmul(&s.right.adjoint());
        assert_close(&rec, &b, 1e-6);
        assert!(s.left.is_unitary(1e-10));
    }
}
