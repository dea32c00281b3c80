//! Secret key rate of the triggered (or, for coherent sources, all) signal
//! pulses, per pumped pulse pair.

use crate::decoy::{e11_upper_bound, single_photon_gain, y11_lower_bound, GainTable, SourcePair};
use crate::error::{Error, Result};
use crate::optics::{Basis, BsmModel, YieldTable};
use crate::runner::{InvalidReason, RatePoint, Scenario};

/// Error-correction inefficiency used throughout.
pub const DEFAULT_F_EC: f64 = 1.16;

/// `-x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

// Arguments already validated or clamped into [0, 1].
fn h2(x: f64) -> f64 {
    binary_entropy(x.clamp(0.0, 1.0)).unwrap_or(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInputs {
    /// Two-single-photon Z yield.
    pub y11: f64,
    /// Two-single-photon X error rate.
    pub e11x: f64,
    /// Z gain of the key pulses.
    pub gain_z: f64,
    pub qber_z: f64,
    /// `P_1(mu')^2`.
    pub p1_sq: f64,
    /// Squared single-photon triggering factor.
    pub q1_sq: f64,
    pub f_ec: f64,
}

impl RateInputs {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("y11", self.y11), ("e11x", self.e11x), ("gain_z", self.gain_z), ("qber_z", self.qber_z)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} is not a probability")));
            }
        }
        if self.f_ec.is_nan() || self.f_ec < 1.0 {
            return Err(Error::Domain(format!("f_ec = {} is below 1", self.f_ec)));
        }
        Ok(())
    }
}

/// `q^2 P_1^2 Y11 [1 - H2(e11)] - S f H2(E)`. May be negative.
pub fn key_rate(inputs: &RateInputs) -> f64 {
    let RateInputs { y11, e11x, gain_z, qber_z, p1_sq, q1_sq, f_ec } = *inputs;
    q1_sq * p1_sq * y11 * (1.0 - h2(e11x)) - gain_z * f_ec * h2(qber_z)
}

/// Meaning of the `q` prefactor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QFactor {
    /// `q_1 = 1 - (1-d)(1-eta)` for heralded sources, 1 for coherent ones.
    SinglePhotonTrigger,
    /// Always 1.
    Unity,
}

/// Knobs shared by every rate evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSettings {
    pub f_ec: f64,
    pub q_factor: QFactor,
    /// Dark count probability of each heralding detector.
    pub heralding_dark: f64,
}

impl Default for RateSettings {
    fn default() -> Self {
        RateSettings { f_ec: DEFAULT_F_EC, q_factor: QFactor::SinglePhotonTrigger, heralding_dark: 1e-6 }
    }
}

/// Z and X yield tables of one link at one distance.
#[derive(Debug, Clone)]
pub struct ChannelTables {
    pub distance_km: f64,
    pub z: YieldTable,
    pub x: YieldTable,
}

impl ChannelTables {
    pub fn new(model: &BsmModel, distance_km: f64, transmittance: f64) -> Self {
        ChannelTables {
            distance_km,
            z: model.yield_table(Basis::Z, transmittance),
            x: model.yield_table(Basis::X, transmittance),
        }
    }

    pub fn cutoff(&self) -> usize {
        self.z.cutoff()
    }
}

/// Every gain record a scenario's estimator reads, simulated from the
/// channel: the key pair in Z and, for finite-decoy scenarios, the weak and
/// strong pairs in both bases.
pub fn simulated_gains(
    scenario: &Scenario,
    tables: &ChannelTables,
    mu: f64,
    mu_prime: f64,
    heralding_dark: f64,
) -> Result<GainTable> {
    let mut gains = GainTable::new();
    gains.observe(&tables.z, &scenario.key_pair(mu_prime, heralding_dark)?)?;
    if let Some((weak, strong)) = scenario.decoy_pairs(mu, mu_prime, heralding_dark)? {
        for yt in [&tables.z, &tables.x] {
            gains.observe(yt, &weak)?;
            gains.observe(yt, &strong)?;
        }
    }
    Ok(gains)
}

/// Full pipeline for one scenario at one `(mu, mu')`: simulated gains,
/// decoy bounds (or the exact single-photon values for asymptotic
/// scenarios), then the key rate.
pub fn rate_for_scenario(
    scenario: &Scenario,
    tables: &ChannelTables,
    mu: f64,
    mu_prime: f64,
    settings: &RateSettings,
) -> Result<RatePoint> {
    let gains = simulated_gains(scenario, tables, mu, mu_prime, settings.heralding_dark)?;
    let exact = scenario.kind().is_asymptotic().then(|| (tables.z.yield_at(1, 1), tables.x.error_at(1, 1)));
    let mut point = rate_from_gains(scenario, &gains, exact, mu, mu_prime, tables.cutoff(), settings)?;
    point.distance_km = tables.distance_km;
    Ok(point)
}

/// Key rate from a gain table alone, as for measured data. Asymptotic
/// scenarios need the exact `(Y11, e11)` in `exact`; finite-decoy scenarios
/// ignore it. The returned point has distance 0.
pub fn rate_from_gains(
    scenario: &Scenario,
    gains: &GainTable,
    exact: Option<(f64, Option<f64>)>,
    mu: f64,
    mu_prime: f64,
    cutoff: usize,
    settings: &RateSettings,
) -> Result<RatePoint> {
    let key = scenario.key_pair(mu_prime, settings.heralding_dark)?;
    let key_rec = *gains.require(Basis::Z, mu_prime, mu_prime, key.class())?;
    let q1 = match (settings.q_factor, key.alice.heralding()) {
        (QFactor::SinglePhotonTrigger, Some(det)) => det.trigger_prob(1),
        _ => 1.0,
    };
    let p1 = key.alice.photon_weight(1);

    let mut point = RatePoint {
        distance_km: 0.0,
        scenario: *scenario,
        mu: if scenario.kind().is_asymptotic() { 0.0 } else { mu },
        mu_prime,
        y11_bound: 0.0,
        e11_bound: 0.5,
        rate: 0.0,
        valid: false,
        reason: None,
    };

    let (y11, e11) = match scenario.decoy_pairs(mu, mu_prime, settings.heralding_dark)? {
        None => exact.ok_or_else(|| {
            Error::Domain(format!("scenario {scenario} needs the exact single-photon yield and error"))
        })?,
        Some((weak, strong)) => match estimate(gains, &weak, &strong, cutoff)? {
            (None, _) => {
                point.reason = Some(InvalidReason::DecoyConditions);
                return Ok(point);
            }
            (Some(y), e) => (y, e),
        },
    };
    point.y11_bound = y11;
    let Some(e11) = e11 else {
        point.reason = Some(InvalidReason::NoPhaseErrorBound);
        return Ok(point);
    };
    point.e11_bound = e11;

    let inputs = RateInputs {
        y11,
        e11x: e11,
        gain_z: key_rec.gain,
        qber_z: key_rec.qber,
        p1_sq: p1 * p1,
        q1_sq: q1 * q1,
        f_ec: settings.f_ec,
    };
    let rate = key_rate(&inputs);
    if rate > 0.0 {
        point.rate = rate;
        point.valid = true;
    } else {
        point.reason = Some(InvalidReason::NonPositiveRate);
    }
    Ok(point)
}

/// `(Y11^Z lower bound, e11^X upper bound)`; the first is `None` when the
/// decoy conditions fail.
fn estimate(
    gains: &GainTable,
    weak: &SourcePair,
    strong: &SourcePair,
    cutoff: usize,
) -> Result<(Option<f64>, Option<f64>)> {
    let Some(y11z) = y11_lower_bound(gains, Basis::Z, weak, strong, cutoff)?.lower_bound() else {
        return Ok((None, None));
    };
    let y11x = y11_lower_bound(gains, Basis::X, weak, strong, cutoff)?.lower_bound();
    let e11 = match y11x {
        Some(y11x) => {
            e11_upper_bound(gains, weak, strong, single_photon_gain(weak, y11x), single_photon_gain(strong, y11x))?
                .value()
        }
        None => None,
    };
    Ok((Some(y11z), e11))
}
