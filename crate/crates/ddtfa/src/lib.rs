//! Adaptive decomposition of periodic signals into `f = a0 + a1*cos(theta)`.
//!
//! The library recovers the mean `a0`, envelope `a1`, and monotone phase
//! `theta` of a periodic signal by iterating a spectral envelope extraction
//! in the phase coordinate against a low-frequency phase correction. Two
//! transform paths are provided:
//!
//! * [`solver::decompose_well_resolved`] for densely sampled signals, using
//!   either periodic-spline interpolation plus FFT or a direct non-uniform
//!   transform in the phase coordinate;
//! * [`sparse::decompose_sparse`] for scattered subsamples, where the phase
//!   spectrum is obtained from an l1 basis-pursuit solve over a warped
//!   Fourier dictionary.
//!
//! [`probe`] carries compressive-sensing diagnostics for the warped
//! dictionaries: mutual coherence, restricted-isometry estimates, covering
//! cardinality bounds, and an oscillatory-sum decay probe.
//!
//! All numeric code is generic over the scalar via [`float::Float`]
//! (`f32`/`f64`); the aliases at the crate root fix the default `f64`
//! instantiation.

pub mod error;
pub mod float;
pub mod linalg;
pub mod model;
pub mod mp;
pub mod probe;
pub mod solver;
pub mod sparse;
pub mod spectral;
pub mod spline;

pub use error::{Error, Result};
pub use float::Float;

/// Default working scalar.
pub type Real = f64;

/// Concrete `f64` aliases for the main domain types.
pub type Signal64 = model::Signal<Real>;
pub type PhaseFn64 = model::PhaseFn<Real>;
pub type GroundTruth64 = model::GroundTruth<Real>;
pub type ThetaSpectrum64 = spectral::ThetaSpectrum<Real>;
pub type Decomposition64 = solver::Decomposition<Real>;
pub type SolverOptions64 = solver::SolverOptions<Real>;
pub type SparseOptions64 = sparse::SparseOptions<Real>;
pub type SensingMatrix64 = sparse::SensingMatrix<Real>;
