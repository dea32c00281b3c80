//! Simulation and decoy-state analysis of measurement-device-independent
//! QKD with heralded single-photon sources.
//!
//! The crate is organized along the pipeline: [`source`] photon statistics,
//! [`optics`] ground-truth relay yields, [`decoy`] estimation of the
//! single-photon quantities from observed gains, [`keyrate`] and the
//! [`runner`] that scans scenarios over distance.

pub mod decoy;
pub mod error;
pub mod keyrate;
pub mod optics;
pub mod runner;
pub mod source;

pub use error::{Error, Result};
