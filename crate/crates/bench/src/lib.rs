//! Fixed inputs shared by the criterion targets, so every run times the same work.

use qlift_core::blockenc::BlockEncoding;
use qlift_core::channels::DensityOperator;
use qlift_core::mat::ComplexMatrix;
use qlift_core::random::{random_density, seeded_rng, unit_hermitian};

/// Seeded Hermitian matrix of unit operator norm.
pub fn hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    unit_hermitian(dim, &mut seeded_rng(seed))
}

/// Seeded full-rank density operator.
pub fn state(dim: usize, seed: u64) -> DensityOperator {
    random_density(dim, dim, &mut seeded_rng(seed))
}

/// Exact `(α, 1, 0)`-encoding of a seeded Hermitian matrix of norm `0.9`.
pub fn hermitian_encoding(dim: usize, alpha: f64, seed: u64) -> BlockEncoding {
    BlockEncoding::dilation_encode(&hermitian(dim, seed).scale_real(0.9), alpha).expect("norm below α")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_reproducible() {
        assert_eq!(hermitian(4, 3), hermitian(4, 3));
        assert!(hermitian_encoding(4, 1.0, 3).verify().1);
        assert_eq!(state(2, 1).dim(), 2);
    }
}
