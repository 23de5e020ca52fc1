//! Robust linear system identification under sparse outliers.
//!
//! The library builds around one statistical model: observations
//! `y = H x + e + w` where `H` is a structured matrix filled from a single
//! Gaussian sequence (each row a sliding window, so anti-diagonals are
//! constant), `x` is the unknown parameter vector, `e` is sparse but
//! arbitrarily large, and `w` is dense small noise. Estimation is by least
//! absolute deviation, `min ‖y − Hx‖₁`, solved exactly as a linear program.
//!
//! Modules:
//! - [`signal`]: sequence/matrix/instance generation and (de)serialization.
//! - [`lad`]: the exact ℓ₁ solver and its optimality certificate.
//! - [`certifier`]: exhaustive exact-recoverability certification for small
//!   supports, with adversarial counterexample construction.
//! - [`thresholds`]: closed-form feasibility test and bisection for the
//!   correctable outlier fraction, plus the special functions behind it.
//! - [`experiments`]: seeded Monte Carlo drivers and CSV/SVG emission.
//! - [`rng`]: the fixed, named generator that makes every run reproducible.

pub mod certifier;
pub mod error;
pub mod experiments;
pub mod lad;
pub mod mat;
pub mod rng;
pub mod signal;
pub mod thresholds;

pub use error::{Error, Result};
pub use lad::{check_optimality, solve_lad, LadOptions, LadSolution, OptimalityCertificate};
pub use signal::{
    GaussSequence, NoiseFamily, NoiseSpec, ProblemInstance, SparseVector, ToeplitzMatrix,
};
