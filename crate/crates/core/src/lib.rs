//! Construction and verification of subsets of Z_N and Z_2^n with prescribed
//! large Fourier spectra, together with additive energy and dissociativity
//! tooling.

pub mod constructions;
pub mod dissociation;
pub mod energy;
pub mod error;
pub mod fourier;
pub mod harness;

pub use error::{Error, Result};
pub use fourier::{DensityFunction, Group, GroupSubset, Spectrum};
