use crate::source::{SourceSpec, TriggerClass};

/// One side's photon-number coefficients as they enter the gain series.
///
/// Two sequences are kept. `edge[m]` weights the terms where the other side
/// contributes vacuum; it carries the full class probability including the
/// herald's dark count. `block[m]` (`m >= 1`) weights the terms where both
/// sides emit photons and uses the detector efficiency alone:
/// `[1-(1-eta)^m] P_m` for triggered events, `(1-eta)^m P_m` for
/// non-triggered events and `P_m` without a herald.
#[derive(Debug, Clone, PartialEq)]
pub struct SideWeights {
    block: Vec<f64>,
    edge: Vec<f64>,
    vacuum_prob: f64,
    tail: f64,
}

impl SideWeights {
    pub fn cutoff(&self) -> usize {
        self.block.len() - 1
    }

    /// Coefficient `a_m` for `m >= 1`; zero for `m = 0`.
    pub fn block(&self, m: usize) -> f64 {
        self.block[m]
    }

    pub fn edge(&self, m: usize) -> f64 {
        self.edge[m]
    }

    /// `P_0(x)`: ratio between this side's vacuum weight at its intensity and
    /// at intensity zero.
    pub fn vacuum_prob(&self) -> f64 {
        self.vacuum_prob
    }

    /// Upper bound on the omitted mass above the cutoff.
    pub fn tail(&self) -> f64 {
        self.tail
    }
}

/// Series coefficients of a source up to `cutoff`.
pub fn side_weights(src: &SourceSpec, cutoff: usize) -> SideWeights {
    let eta = src.heralding().map(|d| d.efficiency()).unwrap_or(1.0);
    let mut block = vec![0.0; cutoff + 1];
    let mut edge = vec![0.0; cutoff + 1];
    for m in 0..=cutoff {
        let p = src.photon_weight(m);
        edge[m] = src.effective_weight(m);
        if m == 0 {
            continue;
        }
        let miss = (1.0 - eta).powi(m as i32);
        block[m] = match src.class() {
            TriggerClass::Triggered => (1.0 - miss) * p,
            TriggerClass::NonTriggered => miss * p,
            TriggerClass::All => p,
        };
    }
    SideWeights { block, edge, vacuum_prob: src.photon_weight(0), tail: src.tail_mass(cutoff) }
}
