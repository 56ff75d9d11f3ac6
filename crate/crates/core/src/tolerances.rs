//! Numerical tolerances shared across modules.

/// Largest `‖A − A†‖_F` accepted by the eigensolver.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;

/// Jacobi stops once the off-diagonal Frobenius mass drops below this times `dim · max(1, ‖A‖_F)`.
pub const JACOBI_OFF_DIAG: f64 = 1e-14;

/// Default unitarity / hermiticity tolerance in operator norm.
pub const UNITARY_TOL: f64 = 1e-10;

/// Slack added to every block-encoding contract check.
pub const CONTRACT_SLACK: f64 = 1e-9;

/// Smallest singular value `closest_unitary` accepts.
pub const SINGULAR_FLOOR: f64 = 1e-12;

/// Trace preservation and POVM completeness.
pub const CHANNEL_TOL: f64 = 1e-9;

/// Eigenvalues below this are zeroed inside the fidelity's square roots; rounding
/// noise of order 1e-17 would otherwise shift `F` by ~1e-9.
pub const FIDELITY_EIG_FLOOR: f64 = 1e-13;

/// Density operator validity (hermiticity, positivity, unit trace).
pub const STATE_TOL: f64 = 1e-10;

/// Slack for the fidelity / trace-distance inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// Chebyshev coefficients below this are zeroed.
pub const COEFF_ZERO: f64 = 1e-14;

/// Allowed magnitude of wrong-parity coefficients.
pub const PARITY_TOL: f64 = 1e-12;

/// Grid slack for polynomial range certification.
pub const CERT_SLACK: f64 = 1e-9;

/// Number of Chebyshev points in the certification grid.
pub const CERT_GRID: usize = 10_000;

/// Number of extra seeded uniform points in the certification grid.
pub const CERT_RANDOM: usize = 1_000;

/// Eigenvector residual accepted by phase estimation.
pub const EIGVEC_TOL: f64 = 1e-8;

/// Two-sided Wilson interval confidence.
pub const WILSON_CONFIDENCE: f64 = 0.99;

/// Default number of tester trials.
pub const DEFAULT_TRIALS: usize = 2000;
