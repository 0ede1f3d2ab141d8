//! Large spectra, representation counts and additive energy.

pub mod additive;
pub mod large;

pub use additive::{
    check_tmain, check_tmain_with, energy, energy_bruteforce, energy_via_fourier, representation_counts,
    tmain_lower_bound, EnergyMethod, EnergyReport, RepresentationConvention, RepresentationCounts, TmainVerdict,
};
pub use large::{large_spectrum, LargeSpectrum, DEFAULT_ETA};
