//! Numerical toolkit for quasi-phase-matched type-0 SPDC pair sources.
//!
//! Models photon-pair generation in periodically poled crystals (ppKTP by
//! default): temperature-dependent dispersion and phase matching, collinear
//! spectra and emission-angle maps, the collinear Gaussian-mode overlap
//! amplitude with its waist sweeps, single-mode-fiber collection optics,
//! heralding/brightness arithmetic, and two-qubit polarization-entanglement
//! analysis (correlation visibilities, CHSH, maximum-likelihood tomography).
//!
//! All intensities are relative; every scan is normalized to a peak of 1.
//! Wavelengths and waists are vacuum-wavelength meters at API boundaries,
//! temperatures are degrees Celsius, scan axes carry their own units.

pub mod collection;
pub mod dispersion;
pub mod entanglement;
mod error;
pub mod fit;
pub mod overlap;
pub mod phasematch;
pub mod quad;
pub mod scan;
pub mod sellmeier;
pub mod tomography;

pub use error::{Error, Result};

/// Speed of light in vacuum (m/s). Only used for unit conversions.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
