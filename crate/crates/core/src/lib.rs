//! Dense numerical toolkit for block-encoding algebra, singular value
//! transformations, sample-based primitives and state-discrimination testers.
//!
//! Everything is exact small-dimension linear algebra over `f64` complex numbers;
//! randomized pieces take explicit seeds.

pub mod blockenc;
pub mod channels;
pub mod circuit;
pub mod error;
pub mod gates;
pub mod mat;
pub mod polyapprox;
pub mod primitives;
pub mod random;
pub mod reductions;
pub mod stats;
pub mod suite;
pub mod tolerances;

pub use blockenc::{BlockEncoding, QueryLedger, StatePreparationPair};
pub use channels::{DensityOperator, Povm, QuantumChannel};
pub use error::{Error, Result};
pub use mat::{ComplexMatrix, HermitianEig, C64};
pub use polyapprox::PolynomialApprox;
