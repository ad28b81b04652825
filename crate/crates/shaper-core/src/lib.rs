//! Probabilistic-shaping toolkit for coded-modulation optical links.
//!
//! The crate evaluates shaped QAM inputs in three channel settings of
//! increasing fidelity: closed-form AWGN (Gauss-Hermite quadrature),
//! a modulation-dependent SPM-XPM Gaussian-noise link model, and a
//! dual-polarization split-step fiber simulator. On top of the
//! evaluators sit two optimizers: a Maxwell-Boltzmann scalar search
//! for the AWGN channel and a projected-gradient PMF search against
//! the link model.
//!
//! Conventions used throughout:
//! - 2D (complex) constellations are normalized to E[|X|^2] = 1 per
//!   complex symbol; 1D (PAM) constellations to E[X^2] = 1 per real
//!   symbol. SNR = 1/sigma2 under either convention.
//! - Rates are reported in bits per 4D symbol (two complex symbols,
//!   i.e. both polarizations) unless a function says otherwise.
//! - The AWGN capacity reference is 2*log2(1+SNR) per 4D symbol.

pub mod air;
pub mod constellation;
pub mod error;
pub mod gnmodel;
pub mod mbopt;
pub mod nlopt;
pub mod pmf;
pub mod presets;
pub mod quadrature;
pub mod rng;
pub mod ssfm;
pub mod tabular;

pub use error::{Error, Result};
