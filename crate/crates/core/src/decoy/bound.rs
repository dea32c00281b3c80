//! Lower bound on the two-single-photon yield `Y11` and upper bound on its
//! phase error `e11`, from observed gains alone.
//!
//! With `c_mn = a_m b_n` the block coefficients of a source pair and
//! `dS = S_xy - S~00 = sum_{m,n>=1} c_mn Y_mn`, any scalar `k` gives the
//! identity
//!
//! ```text
//! Y11 = [k dS_weak - dS_strong + K] / D,   D = k c11_weak - c11_strong,
//! K = sum_{(m,n) != (1,1)} (c_mn_strong - k c_mn_weak) Y_mn.
//! ```
//!
//! `k` cancels the `(1,2)` term. When `D < 0` and every coefficient of `K` is
//! non-positive, `Y11 >= [k dS_weak - dS_strong] / D`. The mirrored case,
//! `D > 0` with non-negative coefficients, gives the same inequality and is
//! what a same-class weak/strong pair (three-intensity decoy with coherent or
//! triggered-only sources) falls into.

use super::table::GainTable;
use super::weights::{side_weights, SideWeights};
use super::SourcePair;
use crate::error::Result;
use crate::optics::{Basis, YieldTable};
use crate::source::{DistributionKind, SourceSpec, TriggerClass};

/// Relative slack when testing coefficient signs; the `(1,2)` and `(2,1)`
/// coefficients are zero up to rounding by construction of `k`.
const SIGN_SLACK: f64 = 1e-12;

/// Which sign pattern certifies the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundBranch {
    /// `D < 0`, all coefficients of `K` non-positive.
    Negative,
    /// `D > 0`, all coefficients of `K` non-negative.
    Positive,
}

/// Parameter-only part of the estimator: `k`, `D` and the sign checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoyConditions {
    pub k_factor: f64,
    pub denominator: f64,
    /// Largest coefficient of `K` signed against the branch: `<= 0` means
    /// every checked coefficient has the required sign.
    pub coefficient_margin: f64,
    /// Log of the asymptotic per-photon growth of `c_strong / c_weak`, for
    /// Alice's and Bob's side.
    pub log_growth: [f64; 2],
    pub branch: Option<BoundBranch>,
}

impl DecoyConditions {
    pub fn ok(&self) -> bool {
        self.branch.is_some()
    }

    /// The sign pattern `D <= 0`, `K <= 0` on its own.
    pub fn negative_form(&self) -> bool {
        self.branch == Some(BoundBranch::Negative)
    }

    /// Coefficient `c_mn(strong) - k c_mn(weak)` of `K`.
    fn coefficient(&self, weak: &Pair<'_>, strong: &Pair<'_>, m: usize, n: usize) -> (f64, f64) {
        let s = strong.0.block(m) * strong.1.block(n);
        let w = self.k_factor * weak.0.block(m) * weak.1.block(n);
        (s - w, s.abs().max(w.abs()))
    }
}

type Pair<'a> = (&'a SideWeights, &'a SideWeights);

/// Per-photon growth rate of one side's class factor.
fn class_growth(src: &SourceSpec) -> f64 {
    match (src.class(), src.heralding()) {
        (TriggerClass::NonTriggered, Some(det)) => 1.0 - det.efficiency(),
        _ => 1.0,
    }
}

/// `lim (a_n(strong) / a_n(weak))^(1/n)` in log form; infinite when the
/// distributions differ in kind.
fn log_growth(strong: &SourceSpec, weak: &SourceSpec) -> f64 {
    let dist = |s: &SourceSpec| match s.kind() {
        DistributionKind::Poisson => s.intensity(),
        DistributionKind::Thermal => s.intensity() / (1.0 + s.intensity()),
    };
    let by_kind = match (strong.kind(), weak.kind()) {
        (DistributionKind::Poisson, DistributionKind::Thermal) => return f64::NEG_INFINITY,
        (DistributionKind::Thermal, DistributionKind::Poisson) => return f64::INFINITY,
        _ => dist(strong).ln() - dist(weak).ln(),
    };
    by_kind + class_growth(strong).ln() - class_growth(weak).ln()
}

/// Computes `k`, `D` and checks the coefficient signs of `K` for all
/// `m, n <= cutoff`, plus the asymptotic growth of the coefficient ratio so
/// that the sign pattern also holds beyond the cutoff.
pub fn decoy_conditions(weak: &SourcePair, strong: &SourcePair, cutoff: usize) -> DecoyConditions {
    let (wa, wb) = (side_weights(&weak.alice, cutoff), side_weights(&weak.bob, cutoff));
    let (sa, sb) = (side_weights(&strong.alice, cutoff), side_weights(&strong.bob, cutoff));
    let weak_w: Pair<'_> = (&wa, &wb);
    let strong_w: Pair<'_> = (&sa, &sb);

    let c12_weak = wa.block(1) * wb.block(2);
    let c12_strong = sa.block(1) * sb.block(2);
    let log_growth = [log_growth(&strong.alice, &weak.alice), log_growth(&strong.bob, &weak.bob)];
    let mut cond = DecoyConditions {
        k_factor: f64::NAN,
        denominator: f64::NAN,
        coefficient_margin: f64::INFINITY,
        log_growth,
        branch: None,
    };
    if !(c12_weak > 0.0 && c12_strong > 0.0) {
        return cond;
    }
    cond.k_factor = c12_strong / c12_weak;
    cond.denominator = cond.k_factor * wa.block(1) * wb.block(1) - sa.block(1) * sb.block(1);

    let branch = if cond.denominator < 0.0 {
        BoundBranch::Negative
    } else if cond.denominator > 0.0 {
        BoundBranch::Positive
    } else {
        return cond;
    };
    let sign = match branch {
        BoundBranch::Negative => 1.0,
        BoundBranch::Positive => -1.0,
    };

    let mut margin = f64::NEG_INFINITY;
    let mut coefficients_ok = true;
    for m in 1..=cutoff {
        for n in 1..=cutoff {
            if (m, n) == (1, 1) {
                continue;
            }
            let (c, scale) = cond.coefficient(&weak_w, &strong_w, m, n);
            let signed = sign * c;
            margin = margin.max(signed);
            if signed > SIGN_SLACK * scale {
                coefficients_ok = false;
            }
        }
    }
    cond.coefficient_margin = margin;

    let growth_ok = log_growth.iter().all(|&g| match branch {
        BoundBranch::Negative => g <= SIGN_SLACK,
        BoundBranch::Positive => g >= -SIGN_SLACK,
    });
    if coefficients_ok && growth_ok {
        cond.branch = Some(branch);
    }
    cond
}

/// `K` evaluated on a known yield table; used to check the exact identity.
pub fn kappa(weak: &SourcePair, strong: &SourcePair, k_factor: f64, yt: &YieldTable) -> f64 {
    let cutoff = yt.cutoff();
    let (wa, wb) = (side_weights(&weak.alice, cutoff), side_weights(&weak.bob, cutoff));
    let (sa, sb) = (side_weights(&strong.alice, cutoff), side_weights(&strong.bob, cutoff));
    let mut total = 0.0;
    for m in 1..=cutoff {
        for n in 1..=cutoff {
            if (m, n) == (1, 1) {
                continue;
            }
            let c = sa.block(m) * sb.block(n) - k_factor * wa.block(m) * wb.block(n);
            total += c * yt.yield_at(m, n);
        }
    }
    total
}

/// `S_xy - S~00` (or the same combination of `E*S`) from the four records of
/// a source pair.
///
/// A record `(x, 0)` is observed with Bob emitting pure vacuum, while the
/// vacuum row inside `S_xy` is weighted by `P_0(y)`; hence
/// `S~00 = P_0(y) S_x0 + P_0(x) S_0y - P_0(x) P_0(y) S_00`.
pub fn vacuum_adjusted(gains: &GainTable, basis: Basis, pair: &SourcePair, errors: bool) -> Result<f64> {
    let (x, y) = (pair.alice.intensity(), pair.bob.intensity());
    let class = pair.class();
    let val = |xa: f64, yb: f64| -> Result<f64> {
        let r = gains.require(basis, xa, yb, class)?;
        Ok(if errors { r.error_gain() } else { r.gain })
    };
    let (p0x, p0y) = (pair.alice.photon_weight(0), pair.bob.photon_weight(0));
    Ok(val(x, y)? - p0y * val(x, 0.0)? - p0x * val(0.0, y)? + p0x * p0y * val(0.0, 0.0)?)
}

/// Result of the `Y11` lower-bound estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct Y11Bound {
    /// Clamped to `[0, 1]`; meaningful only when `conditions_ok`.
    pub value: f64,
    pub numerator: f64,
    pub k_factor: f64,
    pub denominator: f64,
    pub conditions_ok: bool,
    pub coefficient_margin: f64,
    /// The raw quotient fell outside `[0, 1]`.
    pub clamped: bool,
}

impl Y11Bound {
    pub fn lower_bound(&self) -> Option<f64> {
        self.conditions_ok.then_some(self.value)
    }
}

/// `Y11 >= [k (S_weak - S~00_weak) - (S_strong - S~00_strong)] / D`.
pub fn y11_lower_bound(
    gains: &GainTable,
    basis: Basis,
    weak: &SourcePair,
    strong: &SourcePair,
    cutoff: usize,
) -> Result<Y11Bound> {
    let d_weak = vacuum_adjusted(gains, basis, weak, false)?;
    let d_strong = vacuum_adjusted(gains, basis, strong, false)?;
    let cond = decoy_conditions(weak, strong, cutoff);
    let numerator = cond.k_factor * d_weak - d_strong;
    let raw = numerator / cond.denominator;
    let value = if raw.is_nan() { 0.0 } else { raw.clamp(0.0, 1.0) };
    Ok(Y11Bound {
        value,
        numerator,
        k_factor: cond.k_factor,
        denominator: cond.denominator,
        conditions_ok: cond.ok(),
        coefficient_margin: cond.coefficient_margin,
        clamped: !raw.is_nan() && raw != value,
    })
}

/// Symmetric-detector form of the validity conditions: `mu >= (1-eta) mu'`.
pub fn symmetric_condition(mu: f64, mu_prime: f64, eta: f64) -> bool {
    mu >= (1.0 - eta) * mu_prime
}

/// Two-single-photon gains of the triggered and non-triggered `mu'` pulses of
/// a symmetric Poisson source.
pub fn s11_gains(y11: f64, mu_prime: f64, eta: f64) -> (f64, f64) {
    let pair_weight = mu_prime * mu_prime * (-2.0 * mu_prime).exp();
    (eta * eta * pair_weight * y11, (1.0 - eta) * (1.0 - eta) * pair_weight * y11)
}

/// Two-single-photon gain `a_1 b_1 Y11` of any source pair; reduces to
/// [`s11_gains`] for Poisson sources and substitutes `P_1` otherwise.
pub fn single_photon_gain(pair: &SourcePair, y11: f64) -> f64 {
    let a = side_weights(&pair.alice, 1);
    let b = side_weights(&pair.bob, 1);
    a.block(1) * b.block(1) * y11
}

/// Upper bound on the single-photon phase error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct E11Bound {
    /// From the weak pair's records.
    pub e_a: Option<f64>,
    /// From the strong pair's records.
    pub e_b: Option<f64>,
}

impl E11Bound {
    /// `min(e_a, e_b)` clamped to `[0, 0.5]`; `None` when neither is
    /// available.
    pub fn value(&self) -> Option<f64> {
        let v = match (self.e_a, self.e_b) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return None,
        };
        Some(v.clamp(0.0, 0.5))
    }
}

/// `e_a = [E S]~_weak / s11_weak`, `e_b = [E S]~_strong / s11_strong`, from
/// X-basis records. A non-positive single-photon gain makes that term
/// unavailable.
pub fn e11_upper_bound(
    gains_x: &GainTable,
    weak: &SourcePair,
    strong: &SourcePair,
    s11_weak: f64,
    s11_strong: f64,
) -> Result<E11Bound> {
    let term = |pair: &SourcePair, s11: f64| -> Result<Option<f64>> {
        if s11.is_nan() || s11 <= 0.0 {
            return Ok(None);
        }
        Ok(Some(vacuum_adjusted(gains_x, Basis::X, pair, true)? / s11))
    };
    Ok(E11Bound { e_a: term(weak, s11_weak)?, e_b: term(strong, s11_strong)? })
}
