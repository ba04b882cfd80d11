//! Discovery of one-dimensional lattice Hamiltonians whose free time evolution
//! implements high-fidelity quantum state transfer.
//!
//! The crate builds excitation-conserving sector Hamiltonians for two lattice
//! models (a cavity-emitter array and a two-band impurity chain), evolves them
//! spectrally, and searches coupling space with annealed Monte Carlo until a
//! targeted propagator column matches a desired transfer. Spectral statistics
//! and benchmark harnesses for the optimizer live alongside.
//!
//! All numerics are generic over the scalar type through [`Real`]; `f64` is
//! the intended precision and the aliases below fix it.

pub mod anneal;
pub mod bench;
pub mod error;
pub mod evolve;
pub mod model;
pub mod scalar;
pub mod spectra;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations of the core types; the CLI and tests use these.
pub type JchParams64 = model::JchParams<f64>;
pub type PamParams64 = model::PamParams<f64>;
pub type ModelParams64 = model::ModelParams<f64>;
pub type HermitianMatrix64 = model::HermitianMatrix<f64>;
pub type SpectralDecomposition64 = evolve::SpectralDecomposition<f64>;
pub type UnitaryMatrix64 = evolve::UnitaryMatrix<f64>;
pub type Objective64 = anneal::Objective<f64>;
pub type AnnealConfig64 = anneal::AnnealConfig<f64>;
pub type RunRecord64 = anneal::RunRecord<f64>;
