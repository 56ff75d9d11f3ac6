//! Testers that decide state-discrimination instances with block-encoding,
//! sample or simulation access, and the reports they produce.

mod bounds;
mod report;
mod testers;

pub use bounds::{bound_calculator, BoundInput, BoundRecord, ParameterBound};
pub use report::{Check, Direction, ExperimentReport, InstanceOutcome, CSV_HEADER};
pub use testers::{
    ampl_est_tester, entropy_reduction, gibbs_tester, gibbs_tester_on, hamsim_tester, hamsim_tester_on,
    lifting_tester, phase_est_bits, phase_est_tester, phase_est_tester_on, reflection_encoding, search_to_gibbs,
    spectrum_wrapper, tightness_m, tightness_tester, tightness_tester_on, GibbsVariant, InnerTester, LiftMode,
};

use crate::channels::{infidelity, DensityOperator};
use crate::error::{Error, Result};
use crate::gates::pauli_z;
use crate::mat::ComplexMatrix;

/// A yes/no pair `(ρ, σ)` and its infidelity `γ = 1 − F(ρ, σ)`.
#[derive(Clone, Debug)]
pub struct DisInstance {
    pub rho: DensityOperator,
    pub sigma: DensityOperator,
    pub gamma: f64,
}

/// `(½ − s)|0⟩⟨0| + (½ + s)|1⟩⟨1|`
pub fn two_level(s: f64) -> Result<DensityOperator> {
    DensityOperator::new(ComplexMatrix::from_real_diag(&[0.5 - s, 0.5 + s]))
}

impl DisInstance {
    pub fn new(rho: DensityOperator, sigma: DensityOperator) -> Result<Self> {
        let gamma = infidelity(&rho, &sigma)?;
        Ok(Self { rho, sigma, gamma })
    }

    /// `ρ± = (½ ∓ s)|0⟩⟨0| + (½ ± s)|1⟩⟨1|`, yes instance `ρ₊`.
    pub fn symmetric(s: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&s) {
            return Err(Error::ParameterOutOfRange(format!("shift {s} outside [0, ½]")));
        }
        Self::new(two_level(s)?, two_level(-s)?)
    }

    /// Pair used by the amplitude-estimation discriminator: shift `8ε`.
    pub fn tightness(eps: f64) -> Result<Self> {
        Self::symmetric(8.0 * eps)
    }

    /// Gibbs-sampling pair: shift `2/β`.
    pub fn gibbs(beta: f64) -> Result<Self> {
        Self::symmetric(2.0 / beta)
    }

    /// Phase-estimation pair: shift `4δ`.
    pub fn phase(delta: f64) -> Result<Self> {
        Self::symmetric(4.0 * delta)
    }

    /// `ρ = I/2` against `σ = I/2 + (π/t)Z`.
    pub fn hamsim(t: f64) -> Result<Self> {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let sigma = &half + &pauli_z().scale_real(std::f64::consts::PI / t);
        Self::new(DensityOperator::new(half)?, DensityOperator::new(sigma)?)
    }

    /// `ρ = I/2` against `σ = diag(½ − √Δ, ½ + √Δ)`.
    pub fn entropy(delta: f64) -> Result<Self> {
        Self::new(DensityOperator::maximally_mixed(2), two_level(delta.sqrt())?)
    }

    /// The pair `(ρ, ρ)`, used to check that a tester's gap collapses.
    pub fn null(&self) -> Result<Self> {
        Self::new(self.rho.clone(), self.rho.clone())
    }
}
