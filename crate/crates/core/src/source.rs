//! Photon-number statistics of heralded parametric-down-conversion sources
//! and weak coherent sources.
//!
//! A heralded source emits `n` photons in the signal mode with probability
//! `P_n(x)`; its trigger mode is watched by a local detector that fires with
//! probability `q_n`. Conditioning on the detector outcome splits every
//! pumped pulse into a triggered and a non-triggered event, and the weights
//! here are deliberately left un-normalized: rates built on them are per
//! pumped pulse, not per heralded pulse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Photon-number distribution of one mode of the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistributionKind {
    /// `e^{-x} x^n / n!`, pump pulses much longer than the coherence time.
    Poisson,
    /// `x^n / (1+x)^{n+1}`, pump pulses much shorter than the coherence time.
    Thermal,
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionKind::Poisson => f.write_str("poisson"),
            DistributionKind::Thermal => f.write_str("thermal"),
        }
    }
}

impl std::str::FromStr for DistributionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "poisson" => Ok(DistributionKind::Poisson),
            "thermal" => Ok(DistributionKind::Thermal),
            other => Err(Error::Domain(format!("unknown distribution `{other}`"))),
        }
    }
}

/// Which events of a source are kept after the heralding detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TriggerClass {
    #[serde(rename = "t")]
    Triggered,
    #[serde(rename = "nt")]
    NonTriggered,
    /// Every pumped pulse; the only class available without a herald.
    #[serde(rename = "all")]
    All,
}

impl TriggerClass {
    pub fn label(self) -> &'static str {
        match self {
            TriggerClass::Triggered => "t",
            TriggerClass::NonTriggered => "nt",
            TriggerClass::All => "all",
        }
    }
}

impl fmt::Display for TriggerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for TriggerClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "t" | "triggered" => Ok(TriggerClass::Triggered),
            "nt" | "non_triggered" | "nontriggered" => Ok(TriggerClass::NonTriggered),
            "all" => Ok(TriggerClass::All),
            other => Err(Error::Domain(format!("unknown trigger class `{other}`"))),
        }
    }
}

/// The local detector watching the trigger mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeraldingDetector {
    efficiency: f64,
    dark_rate: f64,
}

impl HeraldingDetector {
    pub fn new(efficiency: f64, dark_rate: f64) -> Result<Self> {
        check_probability("heralding efficiency", efficiency)?;
        check_probability("heralding dark rate", dark_rate)?;
        Ok(Self { efficiency, dark_rate })
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn dark_rate(&self) -> f64 {
        self.dark_rate
    }

    /// Probability that the detector fires when `n` photons are emitted.
    pub fn trigger_prob(&self, n: usize) -> f64 {
        trigger_prob(self, n)
    }
}

/// One side's source: distribution, intensity, optional herald and the kept
/// event class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    kind: DistributionKind,
    intensity: f64,
    heralding: Option<HeraldingDetector>,
    class: TriggerClass,
}

impl SourceSpec {
    pub fn new(
        kind: DistributionKind,
        intensity: f64,
        heralding: Option<HeraldingDetector>,
        class: TriggerClass,
    ) -> Result<Self> {
        if !(intensity >= 0.0 && intensity.is_finite()) {
            return Err(Error::Domain(format!("intensity {intensity} must be finite and >= 0")));
        }
        if heralding.is_none() && class != TriggerClass::All {
            return Err(Error::Domain(format!("trigger class `{class}` requires a heralding detector")));
        }
        Ok(Self { kind, intensity, heralding, class })
    }

    /// A weak coherent source (Poisson, no herald).
    pub fn coherent(intensity: f64) -> Result<Self> {
        Self::new(DistributionKind::Poisson, intensity, None, TriggerClass::All)
    }

    pub fn heralded(
        kind: DistributionKind,
        intensity: f64,
        detector: HeraldingDetector,
        class: TriggerClass,
    ) -> Result<Self> {
        Self::new(kind, intensity, Some(detector), class)
    }

    pub fn kind(&self) -> DistributionKind {
        self.kind
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn heralding(&self) -> Option<HeraldingDetector> {
        self.heralding
    }

    pub fn class(&self) -> TriggerClass {
        self.class
    }

    /// The same source at a different intensity.
    pub fn with_intensity(&self, intensity: f64) -> Result<Self> {
        Self::new(self.kind, intensity, self.heralding, self.class)
    }

    /// The same source keeping a different event class.
    pub fn with_class(&self, class: TriggerClass) -> Result<Self> {
        Self::new(self.kind, self.intensity, self.heralding, class)
    }

    /// `P_n(x)` for this source's distribution and intensity.
    pub fn photon_weight(&self, n: usize) -> f64 {
        weight_unchecked(self.kind, self.intensity, n)
    }

    /// Probability that the kept class occurs given `n` emitted photons.
    pub fn class_prob(&self, n: usize) -> f64 {
        match (self.class, self.heralding) {
            (TriggerClass::All, _) | (_, None) => 1.0,
            (TriggerClass::Triggered, Some(det)) => trigger_prob(&det, n),
            (TriggerClass::NonTriggered, Some(det)) => 1.0 - trigger_prob(&det, n),
        }
    }

    /// Un-normalized diagonal weight of the kept class for `n` photons.
    pub fn effective_weight(&self, n: usize) -> f64 {
        effective_weight(self, n)
    }

    /// Certified upper bound on `sum_{n > cutoff} P_n(x)`.
    pub fn tail_mass(&self, cutoff: usize) -> f64 {
        tail_mass(self.kind, self.intensity, cutoff)
    }
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn weight_unchecked(kind: DistributionKind, x: f64, n: usize) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    let ln_w = match kind {
        DistributionKind::Poisson => nf * x.ln() - x - ln_factorial(n),
        DistributionKind::Thermal => nf * x.ln() - (nf + 1.0) * x.ln_1p(),
    };
    ln_w.exp()
}

/// Photon-number probability `P_n(x)` of the given distribution.
pub fn photon_weight(kind: DistributionKind, intensity: f64, n: usize) -> Result<f64> {
    if !(intensity >= 0.0 && intensity.is_finite()) {
        return Err(Error::Domain(format!("intensity {intensity} must be finite and >= 0")));
    }
    Ok(weight_unchecked(kind, intensity, n))
}

/// Heralding probability: `q_0 = d`, `q_n = 1 - (1-d)(1-eta)^n` for `n >= 1`.
pub fn trigger_prob(det: &HeraldingDetector, n: usize) -> f64 {
    if n == 0 {
        det.dark_rate
    } else {
        1.0 - (1.0 - det.dark_rate) * (1.0 - det.efficiency).powi(n as i32)
    }
}

/// Diagonal weight of the un-normalized triggered / non-triggered state.
pub fn effective_weight(src: &SourceSpec, n: usize) -> f64 {
    src.class_prob(n) * src.photon_weight(n)
}

/// Upper bound on the probability mass above `cutoff`.
///
/// Poisson uses the geometric majorant of consecutive ratios
/// `P_{n+1}/P_n = x/(n+1)`; the thermal tail is exact.
pub fn tail_mass(kind: DistributionKind, x: f64, cutoff: usize) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    match kind {
        DistributionKind::Poisson => {
            let first = weight_unchecked(kind, x, cutoff + 1);
            let ratio = x / (cutoff as f64 + 2.0);
            if ratio < 1.0 {
                first / (1.0 - ratio)
            } else {
                // Majorant unusable; fall back to the complement of the head.
                let head: f64 = (0..=cutoff).map(|n| weight_unchecked(kind, x, n)).sum();
                (1.0 - head).max(0.0) + f64::EPSILON
            }
        }
        DistributionKind::Thermal => (x / (1.0 + x)).powi(cutoff as i32 + 1),
    }
}
