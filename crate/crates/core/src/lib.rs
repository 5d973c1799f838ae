//! Seeded random-matrix analytics for spectrum sensing.
//!
//! The crate is organised around five pieces:
//!
//! - [`ensembles`]: deterministic generators for Gaussian noise, Ginibre,
//!   signal-plus-noise data matrices, sample covariance / hollow Wishart
//!   matrices and Euclidean random matrices built from 3D point clouds.
//! - [`spectra`]: eigensolvers plus the reference laws (Marchenko–Pastur,
//!   ring law, Ginibre-product radial law) and goodness-of-fit tools.
//! - [`detection`]: the known-mean LRT and deflection, the trace detector on
//!   the hollow Wishart matrix, spectral detectors and a Monte Carlo ROC
//!   harness whose output does not depend on the worker count.
//! - [`fbl`]: the two-term normal approximation of the finite-blocklength
//!   rate.
//! - [`cli`]: declarative experiment configs and the runner behind the
//!   `rmtlab` binary.
//!
//! Every sampler is a pure function of its parameters and a `u64` seed.

pub mod cli;
pub mod detection;
pub mod ensembles;
mod error;
pub mod fbl;
pub mod io;
pub(crate) mod linalg;
pub mod seed;
pub mod spectra;

pub use error::{Error, Result};
pub use faer::c64;
