//! Variance-based sensitivity indices for models whose inputs are confined
//! to a non-rectangular domain by inequality constraints.
//!
//! The crate provides
//!
//! * [`domain`]: models, constraints and the built-in benchmark problems;
//! * [`sampling`]: pseudorandom and Sobol' point streams, acceptance–rejection
//!   batches, paired designs, domain bracketing and conditional-CDF sampling;
//! * [`estimators`]: Monte Carlo estimators of main and total effects;
//! * [`quadrature`]: trapezoidal grid quadrature of the same quantities;
//! * [`benchmarks`]: exact reference values and a midpoint-rule oracle;
//! * [`harness`]: single runs, convergence studies, sweeps and estimator
//!   comparisons, as used by the `cgsa` binary.

pub mod benchmarks;
pub mod domain;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod quadrature;
pub mod sampling;

pub use error::{Error, Result};
