//! Seeded random ensembles and per-trial seed derivation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::DensityOperator;
use crate::mat::{complete_columns, inner, norm, ComplexMatrix, C64};

pub type QRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> QRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent generator for trial `index` of a run seeded with `master`.
pub fn trial_rng(master: u64, index: u64) -> QRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

pub fn gaussian_complex(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Gaussian unitary ensemble sample, normalized to unit operator norm scale.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(rng));
    (&g + &g.adjoint()).scale_real(0.5 / (dim as f64).sqrt())
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(rng));
    let mut q = ComplexMatrix::zeros(dim);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut x = g.column(j);
        for _ in 0..2 {
            for b in &cols {
                let p = inner(b, &x);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi -= p * bi;
                }
            }
        }
        let n = norm(&x);
        let col: Vec<C64> = x.iter().map(|z| z / n).collect();
        q.set_column(j, &col);
        cols.push(col);
    }
    let filled = vec![true; dim];
    complete_columns(&mut q, &filled);
    q
}

pub fn haar_state(dim: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let n = norm(&v);
    v.iter().map(|z| z / n).collect()
}

/// Random density operator `GG†/tr(GG†)` with `G` a `dim × rank` Ginibre matrix.
pub fn random_density(dim: usize, rank: usize, rng: &mut impl Rng) -> DensityOperator {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..rank.min(dim) {
            g[(i, j)] = gaussian_complex(rng);
        }
    }
    let m = g.matmul(&g.adjoint());
    let t = m.trace().re;
    DensityOperator::new(m.scale_real(1.0 / t)).expect("Ginibre state is valid")
}

/// Random contraction with operator norm exactly `norm_target`.
pub fn random_contraction(dim: usize, norm_target: f64, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian_complex(rng));
    let n = crate::mat::op_norm(&g);
    if n == 0.0 {
        return ComplexMatrix::zeros(dim);
    }
    g.scale_real(norm_target / n)
}

/// Unit-norm Hermitian perturbation direction.
pub fn unit_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let h = random_hermitian(dim, rng);
    let n = crate::mat::op_norm(&h);
    if n == 0.0 {
        return ComplexMatrix::zeros(dim);
    }
    h.scale_real(1.0 / n)
}

