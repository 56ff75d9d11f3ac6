//! Robustness of block-encodings and of singular value transforms.

use crate::error::{Error, Result};
use crate::mat::{closest_unitary, complete_columns, matrix_function_real, op_norm, ComplexMatrix, ZERO};
use crate::polyapprox::PolynomialApprox;

use super::{sv_transform, unitary_dilation, BlockEncoding};

/// `√(2/(1 − ‖(A+Ã)/2‖²))·‖A − Ã‖`, or `None` when the midpoint has norm 1.
pub fn robustness_bound(a: &ComplexMatrix, a_tilde: &ComplexMatrix) -> Option<f64> {
    let d = op_norm(&(a - a_tilde));
    if d == 0.0 {
        return Some(0.0);
    }
    let m = op_norm(&(a + a_tilde).scale_real(0.5));
    if m >= 1.0 {
        return None;
    }
    Some((2.0 / (1.0 - m * m)).sqrt() * d)
}

/// Whether `‖P^SV(A) − P^SV(A′)‖ ≤ 4d√‖A − A′‖` holds for the given pair.
pub fn svt_robustness_check(p: &PolynomialApprox, a: &ComplexMatrix, a2: &ComplexMatrix) -> bool {
    let (Ok(x), Ok(y)) = (sv_transform(a, p), sv_transform(a2, p)) else {
        return false;
    };
    let lhs = op_norm(&(&x - &y));
    let rhs = 4.0 * p.degree() as f64 * op_norm(&(a - a2)).sqrt();
    lhs <= rhs + 1e-12
}

/// Inverse square root restricted to a positive-definite Hermitian matrix.
fn inv_sqrt(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    matrix_function_real(&g.hermitian_part(), |x| 1.0 / x.max(1e-300).sqrt())
}

/// Cosine-sine route: rotate the off-diagonal blocks of `U` into canonical position,
/// swap the canonical dilation of `A` for that of `Ã`, rotate back.
fn cs_candidate(u: &ComplexMatrix, n: usize, a_tilde: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = u.dim();
    let rest = dim - n;
    let a = u.top_left(n);
    let id = ComplexMatrix::identity(n);
    let sc_inv = inv_sqrt(&(&id - &a.adjoint().matmul(&a)))?;
    let sr_inv = inv_sqrt(&(&id - &a.matmul(&a.adjoint())))?;
    // Q_C = C S_c⁻¹ and Q_B = B† S_r⁻¹ as columns of length dim − n
    let mut l = ComplexMatrix::zeros(rest);
    let mut r = ComplexMatrix::zeros(rest);
    for j in 0..n {
        let mut qc = vec![ZERO; rest];
        let mut qb = vec![ZERO; rest];
        for (i, (zc, zb)) in qc.iter_mut().zip(qb.iter_mut()).enumerate() {
            for k in 0..n {
                *zc += u[(n + i, k)] * sc_inv[(k, j)];
                *zb += u[(k, n + i)].conj() * sr_inv[(k, j)];
            }
        }
        l.set_column(j, &qc);
        r.set_column(j, &qb);
    }
    let mut filled = vec![false; rest];
    filled[..n].iter_mut().for_each(|f| *f = true);
    complete_columns(&mut l, &filled);
    complete_columns(&mut r, &filled);
    let lh = id.direct_sum(&l);
    let rh = id.direct_sum(&r);
    let t = lh.adjoint().matmul(u).matmul(&rh);
    let y22 = t.block(2 * n, 2 * n, dim - 2 * n);
    let middle = unitary_dilation(a_tilde)?.direct_sum(&y22);
    Ok(lh.matmul(&middle).matmul(&rh.adjoint()))
}

/// Alternating projections between "top-left block equals Ã" and the unitary group.
fn projection_candidate(u: &ComplexMatrix, n: usize, a_tilde: &ComplexMatrix) -> Option<ComplexMatrix> {
    let mut x = u.clone();
    for _ in 0..500 {
        x.set_block(0, 0, a_tilde);
        x = closest_unitary(&x).ok()?;
        if (&x.top_left(n) - a_tilde).max_abs() < 1e-14 {
            break;
        }
    }
    Some(x)
}

/// A unitary that block-encodes `Ã` exactly and lies close to the (padded)
/// unitary of `u`, together with the measured operator-norm distance.
///
/// `a_tilde` is the desired top-left block, i.e. the target divided by `α`.
/// The ambient space is padded with idle ancillas until it has at least `8N`
/// dimensions.
pub fn nearest_block_encoding(u: &BlockEncoding, a_tilde: &ComplexMatrix) -> Result<(BlockEncoding, f64)> {
    let n = u.system_dim();
    if a_tilde.dim() != n {
        return Err(Error::DimensionMismatch("desired block size".into()));
    }
    let a = u.block();
    let d = op_norm(&(&a - a_tilde));
    let m = op_norm(&(&a + a_tilde).scale_real(0.5));
    if d + m * m > 1.0 + 1e-12 {
        return Err(Error::HypothesisViolated(format!("‖A − Ã‖ + ‖(A+Ã)/2‖² = {:.6} > 1", d + m * m)));
    }
    let mut pad = 0;
    while (u.core().dim() << pad) < 8 * n {
        pad += 1;
    }
    let big = ComplexMatrix::identity(1 << pad).kron(u.core());

    let exact = |c: &ComplexMatrix| (&c.top_left(n) - a_tilde).max_abs() <= 1e-10 && c.is_unitary(1e-9);
    let mut candidates = Vec::new();
    if op_norm(&a) < 1.0 - 1e-9 {
        if let Ok(c) = cs_candidate(&big, n, a_tilde) {
            candidates.push(c);
        }
    }
    if let Some(c) = projection_candidate(&big, n, a_tilde) {
        candidates.push(c);
    }
    let best = candidates
        .into_iter()
        .filter(exact)
        .map(|c| {
            let dist = op_norm(&(&big - &c));
            (dist, c)
        })
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .ok_or_else(|| Error::ConstructionFailed("no exact nearby block-encoding found".into()))?;
    let (dist, core) = best;
    let enc = BlockEncoding::from_parts(
        core,
        u.n(),
        u.a() + pad,
        u.alpha(),
        0.0,
        a_tilde.scale_real(u.alpha()),
        u.ledger().clone(),
    )?;
    Ok((enc, dist))
}
