//! Noise budget for optical-lever detection of mechanical resonators.
//!
//! The crate models a Gaussian laser reflected off a tilting resonator and
//! read out by a split photodetector placed somewhere along a lens system.
//! The position of the detector selects the measured quadrature through the
//! accumulated Gouy phase, and the optomechanical correlation between
//! amplitude and phase quadratures lets a suitable plane cancel back action.
//!
//! Modules, bottom up:
//!
//! - [`quadrature`]: adaptive Gauss-Kronrod integration and a golden-section
//!   minimizer used across the crate.
//! - [`hermite_gauss`]: Hermite-Gaussian modes and the split-detector /
//!   mode-shape overlap integrals.
//! - [`beamline`]: ABCD propagation of the complex beam radius with the
//!   accumulated Gouy phase, and quadrature-plane lookup.
//! - [`mechanics`]: susceptibility, thermal and zero-point tilt spectra, mode
//!   identification and ring-down fits.
//! - [`noise_spectra`]: the quantum and classical tilt spectra, SQL,
//!   cooperativity, detection efficiency and detector-referred density maps.
//! - [`evasion`]: back-action-evasion quadrature and plane, and the paraxial
//!   ray picture of the same cancellation.

pub mod beamline;
pub mod constants;
pub mod error;
pub mod evasion;
pub mod hermite_gauss;
pub mod mechanics;
pub mod noise_spectra;
pub mod quadrature;

pub use error::{Error, Result};
