use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::decoy::SourcePair;
use crate::error::{Error, Result};
use crate::source::{DistributionKind, HeraldingDetector, SourceSpec, TriggerClass};

/// Heralding efficiency assumed when a heralded scenario names none.
pub const DEFAULT_HERALDING_EFFICIENCY: f64 = 0.75;

/// Source and estimator combinations compared in the scans.
///
/// `W` uses weak coherent pulses, `H` heralded Poisson sources and `T`
/// heralded thermal sources. `0` means infinitely many decoys (the true
/// single-photon quantities are used), the other digits a finite decoy set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ScenarioKind {
    W0,
    W1,
    H0,
    /// Triggered `mu` against non-triggered `mu'`, with `mu = (1-eta) mu'`.
    H1,
    /// Triggered events only, at `mu` and `mu'`.
    H2,
    T0,
    T1,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 7] = [
        ScenarioKind::W0,
        ScenarioKind::W1,
        ScenarioKind::H0,
        ScenarioKind::H1,
        ScenarioKind::H2,
        ScenarioKind::T0,
        ScenarioKind::T1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::W0 => "W0",
            ScenarioKind::W1 => "W1",
            ScenarioKind::H0 => "H0",
            ScenarioKind::H1 => "H1",
            ScenarioKind::H2 => "H2",
            ScenarioKind::T0 => "T0",
            ScenarioKind::T1 => "T1",
        }
    }

    pub fn is_asymptotic(self) -> bool {
        matches!(self, ScenarioKind::W0 | ScenarioKind::H0 | ScenarioKind::T0)
    }

    pub fn is_heralded(self) -> bool {
        !matches!(self, ScenarioKind::W0 | ScenarioKind::W1)
    }

    /// `mu` follows `mu'` as `(1-eta) mu'` instead of staying fixed.
    pub fn coupled_intensity(self) -> bool {
        matches!(self, ScenarioKind::H1 | ScenarioKind::T1)
    }

    pub fn distribution(self) -> DistributionKind {
        match self {
            ScenarioKind::T0 | ScenarioKind::T1 => DistributionKind::Thermal,
            _ => DistributionKind::Poisson,
        }
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown scenario `{s}`")))
    }
}

/// A scenario together with its heralding efficiency (`None` for coherent
/// sources). Written as `H1@0.9`; a bare `H1` takes the default efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    kind: ScenarioKind,
    heralding_efficiency: Option<f64>,
}

impl Scenario {
    pub fn new(kind: ScenarioKind, heralding_efficiency: f64) -> Result<Self> {
        if !(heralding_efficiency > 0.0 && heralding_efficiency <= 1.0) {
            return Err(Error::Domain(format!("heralding efficiency {heralding_efficiency} outside (0, 1]")));
        }
        Ok(Scenario { kind, heralding_efficiency: kind.is_heralded().then_some(heralding_efficiency) })
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn heralding_efficiency(&self) -> Option<f64> {
        self.heralding_efficiency
    }

    /// Parses `KIND` or `KIND@eta`, filling in `default_eta` for the former.
    pub fn parse(s: &str, default_eta: f64) -> Result<Self> {
        let (kind, eta) = match s.trim().split_once('@') {
            Some((k, e)) => {
                let eta = e.trim().parse::<f64>().map_err(|_| Error::Domain(format!("bad efficiency in `{s}`")))?;
                (k.parse::<ScenarioKind>()?, eta)
            }
            None => (s.parse::<ScenarioKind>()?, default_eta),
        };
        Scenario::new(kind, eta)
    }

    /// Intensity of the weaker decoy for a given `mu'`.
    pub fn weak_intensity(&self, mu_prime: f64, mu_fixed: f64) -> f64 {
        match self.heralding_efficiency {
            Some(eta) if self.kind.coupled_intensity() => (1.0 - eta) * mu_prime,
            _ => mu_fixed,
        }
    }

    fn source(&self, x: f64, class: TriggerClass, heralding_dark: f64) -> Result<SourceSpec> {
        match self.heralding_efficiency {
            None => SourceSpec::coherent(x),
            Some(eta) => {
                let det = HeraldingDetector::new(eta, heralding_dark)?;
                SourceSpec::heralded(self.kind.distribution(), x, det, class)
            }
        }
    }

    /// Symmetric source pair whose `(mu', mu')` Z-basis gain carries the key.
    pub fn key_pair(&self, mu_prime: f64, heralding_dark: f64) -> Result<SourcePair> {
        let class = if self.kind.is_heralded() { TriggerClass::Triggered } else { TriggerClass::All };
        Ok(SourcePair::symmetric(self.source(mu_prime, class, heralding_dark)?))
    }

    /// `(weak, strong)` pairs feeding the decoy estimator; `None` for the
    /// asymptotic scenarios.
    pub fn decoy_pairs(&self, mu: f64, mu_prime: f64, heralding_dark: f64) -> Result<Option<(SourcePair, SourcePair)>> {
        let (weak_class, strong_class) = match self.kind {
            ScenarioKind::W0 | ScenarioKind::H0 | ScenarioKind::T0 => return Ok(None),
            ScenarioKind::W1 => (TriggerClass::All, TriggerClass::All),
            ScenarioKind::H2 => (TriggerClass::Triggered, TriggerClass::Triggered),
            ScenarioKind::H1 | ScenarioKind::T1 => (TriggerClass::Triggered, TriggerClass::NonTriggered),
        };
        let weak = SourcePair::symmetric(self.source(mu, weak_class, heralding_dark)?);
        let strong = SourcePair::symmetric(self.source(mu_prime, strong_class, heralding_dark)?);
        Ok(Some((weak, strong)))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.heralding_efficiency {
            Some(eta) => write!(f, "{}@{}", self.kind.name(), eta),
            None => f.write_str(self.kind.name()),
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::parse(s, DEFAULT_HERALDING_EFFICIENCY)
    }
}

impl Serialize for Scenario {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scenario {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
