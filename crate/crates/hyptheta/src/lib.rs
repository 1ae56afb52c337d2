//! Numerical Riemann theta functions, hyperelliptic period matrices, and the
//! symbolic + numerical machinery for the cubic identities that cut out the
//! hyperelliptic Jacobian locus, together with multisecant rank tests.
//!
//! The crate is organized around five subsystems:
//!
//! * [`chars`]: exact (Z/2Z)^g characteristic arithmetic;
//! * [`theta`]: truncated lattice sums for theta, theta with characteristics,
//!   second-order thetas, gradients and the Kummer embedding;
//! * [`periods`]: period matrices of y^2 = prod (x - p_i) over real branch
//!   points, with the Weierstrass half-period images;
//! * [`identities`]: exact generation and cancellation of the sigma-indexed
//!   cubic identities and the genus 2/3/4 reductions;
//! * [`verifier`]: residual checks for the addition-formula chain, cubics,
//!   secant ranks, and structured JSON reports.

pub mod chars;
pub mod error;
pub mod identities;
pub mod lattice;
pub mod periods;
pub mod theta;
pub mod verifier;

pub use chars::{enumerate, s_vector, BinaryVector, Characteristic, Parity};
pub use error::{Error, Result};
pub use identities::{gen_cubics, CubicIdentity, HalfPeriodSpec, Monomial};
pub use lattice::TruncationSpec;
pub use periods::{period_matrix, weierstrass_images, BranchConfig, PeriodData};
pub use theta::{kummer, theta, theta2, theta_char, CVector, KummerVector, PeriodMatrix};
pub use verifier::{
    run_suite, secant_rank, Suite, SuiteResult, TauSource, Verdict, VerifyConfig, VerifyInput,
};
