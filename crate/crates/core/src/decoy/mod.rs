//! Decoy-state estimation from observed gains.
//!
//! Gains are simulated from a [`YieldTable`](crate::optics::YieldTable) or
//! read from a CSV of measured records, and the estimator only ever looks at
//! the [`GainTable`].

mod bound;
mod gains;
mod table;
mod weights;

pub use bound::{
    decoy_conditions, e11_upper_bound, kappa, s11_gains, single_photon_gain, symmetric_condition, vacuum_adjusted,
    y11_lower_bound, BoundBranch, DecoyConditions, E11Bound, Y11Bound,
};
pub use gains::{gain_from_yields, GainEstimate};
pub use table::{GainRecord, GainTable};
pub use weights::{side_weights, SideWeights};

use crate::error::{Error, Result};
use crate::source::{SourceSpec, TriggerClass};

/// Alice's and Bob's source settings for one intensity pair. Both sides
/// post-select on the same trigger class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePair {
    pub alice: SourceSpec,
    pub bob: SourceSpec,
}

impl SourcePair {
    pub fn new(alice: SourceSpec, bob: SourceSpec) -> Result<Self> {
        if alice.class() != bob.class() {
            return Err(Error::Domain(format!("trigger classes differ: alice {}, bob {}", alice.class(), bob.class())));
        }
        Ok(SourcePair { alice, bob })
    }

    pub fn symmetric(src: SourceSpec) -> Self {
        SourcePair { alice: src, bob: src }
    }

    pub fn class(&self) -> TriggerClass {
        self.alice.class()
    }

    pub fn with_intensities(&self, x: f64, y: f64) -> Result<Self> {
        Ok(SourcePair { alice: self.alice.with_intensity(x)?, bob: self.bob.with_intensity(y)? })
    }
}
