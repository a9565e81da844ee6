//! Phase mismatches and effective nonlinear coefficients of ±1 domain patterns.
//!
//! Lengths are micrometres throughout; wavelengths enter in nanometres at the
//! public boundary and are converted once.

mod deff;
mod dispersion;
mod pattern;
mod spectrum;

pub use deff::{
    deff_shg, deff_thg, domain_integral_factor, triangle_integral_factor, ComplexValue,
    PhaseMismatchPair, ShgKernel, ThgKernel,
};
pub use dispersion::{phase_mismatches, DispersionModel, SellmeierCoefficients};
pub use pattern::DomainPattern;
pub use spectrum::{sweep_spectrum, Process, SpectrumPoint};

/// Nanometres to micrometres.
#[inline]
pub fn nm_to_um(nm: f64) -> f64 {
    nm * 1e-3
}
