//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("binary vector length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("genus {genus} out of supported range {min}..={max}")]
    GenusOutOfRange { genus: usize, min: usize, max: usize },

    #[error("prefix index {k} out of range 0..={genus}")]
    PrefixOutOfRange { k: usize, genus: usize },

    #[error("invalid characteristic string `{0}`")]
    BadCharacteristic(String),

    #[error("period matrix is not symmetric (defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("imaginary part of the period matrix is not positive definite (min eigenvalue {min_eig:.3e})")]
    ImNotPositiveDefinite { min_eig: f64 },

    #[error("truncation ellipsoid would contain roughly {estimate} lattice points (cap {cap})")]
    LatticeCapExceeded { estimate: u64, cap: u64 },

    #[error("all second-order theta values vanished simultaneously; numerics fault")]
    ZeroKummerVector,

    #[error("branch configuration invalid: {0}")]
    BadBranchConfig(String),

    #[error("quadrature did not converge: node-doubling delta {delta:.3e} exceeds {tol:.1e}")]
    QuadratureNotConverged { delta: f64, tol: f64 },

    #[error("period data invariant violated: {0}")]
    PeriodInvariantViolated(String),

    #[error("theta denominator {index} too small (|value| = {modulus:.3e}); resample inputs")]
    DenominatorTooSmall { index: usize, modulus: f64 },

    #[error("fixture mismatch for sigma={sigma}: {detail}")]
    FixtureMismatch { sigma: String, detail: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
