//! Finite-size spacing distributions for the circular random-matrix ensembles.
//!
//! The library computes the leading term and the 1/N² correction of spacing
//! statistics for the CUE, COE and CSE (with thinning) along two independent
//! routes:
//!
//! * quadrature-discretised Fredholm operator terms (determinants, traces,
//!   resolvent traces and the linear correction functional `omega`), and
//! * Painlevé σ-form ODEs (σPV for the sine-kernel determinant, σPIII′ limits
//!   for the ± kernels, each with a linear perturbation equation).
//!
//! A CMV-model Monte Carlo sampler for the circular β ensembles and an
//! ingestion/unfolding pipeline for Riemann-zero height lists provide the
//! empirical side of the comparisons.

pub mod ensembles;
pub mod error;
pub mod kernels;
mod linalg;
pub mod operators;
pub mod painleve;
pub mod quadrature;
pub mod spacings;
pub mod zeros;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) mod test_util;
