//! Ground-truth model of the untrusted relay.
//!
//! Fock-number inputs pass through binomial loss, a polarization
//! misalignment on Bob's arm, the 50/50 beamsplitter and the polarizing
//! beamsplitters; four threshold detectors with dark counts decide the
//! announcement. The output is a [`YieldTable`] per basis.

mod bsm;
mod fock;
mod yields;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use bsm::{bsm_outcome_distribution, Bb84State, BsmModel, BsmOutcome};
pub use fock::{bs_output, thin};
pub use yields::{yield_table, YieldTable};

use crate::error::{check_probability, Error, Result};

/// Default photon-number cutoff of every series.
pub const DEFAULT_CUTOFF: usize = 8;
/// Largest total photon number the dense Fock expansion will accept.
pub const DEFAULT_PHOTON_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    /// Rectilinear; key generation.
    Z,
    /// Diagonal; error testing.
    X,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Z => f.write_str("Z"),
            Basis::X => f.write_str("X"),
        }
    }
}

impl std::str::FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Z" | "z" => Ok(Basis::Z),
            "X" | "x" => Ok(Basis::X),
            other => Err(Error::Domain(format!("unknown basis `{other}`"))),
        }
    }
}

/// Channel and relay parameters. The relay sits midway between Alice and Bob.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkSpec {
    attenuation_db_per_km: f64,
    total_distance_km: f64,
    relay_efficiency: f64,
    relay_dark_rate: f64,
    misalignment: f64,
    cutoff: usize,
    photon_cap: usize,
}

impl Default for LinkSpec {
    fn default() -> Self {
        Self {
            attenuation_db_per_km: 0.2,
            total_distance_km: 0.0,
            relay_efficiency: 0.145,
            relay_dark_rate: 3e-6,
            misalignment: 0.015,
            cutoff: DEFAULT_CUTOFF,
            photon_cap: DEFAULT_PHOTON_CAP,
        }
    }
}

impl LinkSpec {
    pub fn builder() -> LinkSpecBuilder {
        LinkSpecBuilder { spec: LinkSpec::default() }
    }

    pub fn attenuation_db_per_km(&self) -> f64 {
        self.attenuation_db_per_km
    }

    pub fn total_distance_km(&self) -> f64 {
        self.total_distance_km
    }

    pub fn relay_efficiency(&self) -> f64 {
        self.relay_efficiency
    }

    pub fn relay_dark_rate(&self) -> f64 {
        self.relay_dark_rate
    }

    pub fn misalignment(&self) -> f64 {
        self.misalignment
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn photon_cap(&self) -> usize {
        self.photon_cap
    }

    /// Per-side survival probability, relay detector efficiency included.
    pub fn transmittance(&self) -> f64 {
        let half_loss_db = self.attenuation_db_per_km * self.total_distance_km / 2.0;
        self.relay_efficiency * 10f64.powf(-half_loss_db / 10.0)
    }

    /// Same link at another Alice-to-Bob distance.
    pub fn at_distance(&self, km: f64) -> Result<Self> {
        let mut b = self.to_builder();
        b.spec.total_distance_km = km;
        b.build()
    }

    pub fn to_builder(&self) -> LinkSpecBuilder {
        LinkSpecBuilder { spec: *self }
    }
}

#[derive(Debug, Clone)]
pub struct LinkSpecBuilder {
    spec: LinkSpec,
}

impl LinkSpecBuilder {
    pub fn attenuation_db_per_km(mut self, v: f64) -> Self {
        self.spec.attenuation_db_per_km = v;
        self
    }

    pub fn distance_km(mut self, v: f64) -> Self {
        self.spec.total_distance_km = v;
        self
    }

    pub fn relay_efficiency(mut self, v: f64) -> Self {
        self.spec.relay_efficiency = v;
        self
    }

    pub fn relay_dark_rate(mut self, v: f64) -> Self {
        self.spec.relay_dark_rate = v;
        self
    }

    pub fn misalignment(mut self, v: f64) -> Self {
        self.spec.misalignment = v;
        self
    }

    pub fn cutoff(mut self, v: usize) -> Self {
        self.spec.cutoff = v;
        self
    }

    pub fn photon_cap(mut self, v: usize) -> Self {
        self.spec.photon_cap = v;
        self
    }

    pub fn build(self) -> Result<LinkSpec> {
        let s = self.spec;
        for (name, v) in [("attenuation", s.attenuation_db_per_km), ("distance", s.total_distance_km)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        check_probability("relay efficiency", s.relay_efficiency)?;
        check_probability("relay dark rate", s.relay_dark_rate)?;
        check_probability("misalignment", s.misalignment)?;
        if s.cutoff < 2 {
            return Err(Error::Domain(format!("cutoff {} must be at least 2", s.cutoff)));
        }
        Ok(s)
    }
}
