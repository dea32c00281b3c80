use super::weights::SideWeights;
use crate::error::{Error, Result};
use crate::optics::YieldTable;

/// Gain, QBER and truncation certificate of one source pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainEstimate {
    pub gain: f64,
    /// `E * S`, the gain of erroneous announcements.
    pub error_gain: f64,
    pub qber: f64,
    /// The true gain lies in `[gain, gain + tail]`.
    pub tail: f64,
}

/// Observable gain of a source pair.
///
/// The vacuum row and column use the edge weights (`L_A`, `L_B`, `L_0`), so
/// that `S~00 = L_A + L_B - L_0` holds exactly, and the block `m, n >= 1`
/// uses the block coefficients.
pub fn gain_from_yields(alice: &SideWeights, bob: &SideWeights, yt: &YieldTable) -> Result<GainEstimate> {
    let cutoff = alice.cutoff();
    if bob.cutoff() != cutoff || yt.cutoff() < cutoff {
        return Err(Error::Domain(format!(
            "weight cutoffs ({}, {}) incompatible with yield table cutoff {}",
            cutoff,
            bob.cutoff(),
            yt.cutoff()
        )));
    }
    let mut gain = 0.0;
    let mut error_gain = 0.0;
    let mut add = |w: f64, m: usize, n: usize| {
        gain += w * yt.yield_at(m, n);
        error_gain += w * yt.error_yield(m, n);
    };
    // L_A: Bob's vacuum row, m >= 0.
    for m in 0..=cutoff {
        add(alice.edge(m) * bob.edge(0), m, 0);
    }
    // L_B - L_0: Alice's vacuum column, n >= 1.
    for n in 1..=cutoff {
        add(alice.edge(0) * bob.edge(n), 0, n);
    }
    for m in 1..=cutoff {
        for n in 1..=cutoff {
            add(alice.block(m) * bob.block(n), m, n);
        }
    }
    let qber = if gain > 0.0 { error_gain / gain } else { 0.0 };
    Ok(GainEstimate { gain, error_gain, qber, tail: alice.tail() + bob.tail() })
}
