//! Prior-weighted Boltzmann statistics.
//!
//! Exact macrostate combinatorics, entropy and cross-entropy functionals,
//! prior-weighted equilibrium distributions with inverse-temperature solving,
//! Einstein fluctuation probabilities and harmonic-oscillator applications,
//! plus a brute-force [`oracle`] that checks the asymptotic relations against
//! exact enumeration at small particle counts.

pub mod combinatorics;
pub mod entropy;
pub mod equilibrium;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod oscillators;
pub mod system;

pub use error::{Error, Result};
pub use system::{
    uniform_prior, validate_spec, EnergySpectrum, Macrostate, ProbabilityVector, RawSpec,
    SystemSpec,
};
