//! Bell-state measurement at the relay: 50/50 beamsplitter, two polarizing
//! beamsplitters and four threshold detectors.
//!
//! Detector modes are ordered `[c_H, c_V, d_H, d_V]` where `c`/`d` are the two
//! beamsplitter output ports. A Bell announcement needs exactly two clicks:
//! `{c_H, d_V}` or `{c_V, d_H}` is `Psi-`, `{c_H, c_V}` or `{d_H, d_V}` is
//! `Psi+`; every other click pattern is discarded.

use std::f64::consts::FRAC_1_SQRT_2;

use super::fock::{factorial, thin, CreationPoly};
use super::{Basis, LinkSpec};
use crate::error::{Error, Result};

const PSI_MINUS_PATTERNS: [u8; 2] = [0b1001, 0b0110];
const PSI_PLUS_PATTERNS: [u8; 2] = [0b0011, 0b1100];

/// One of the four BB84 polarization states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bb84State {
    H,
    V,
    Plus,
    Minus,
}

impl Bb84State {
    pub fn encode(basis: Basis, bit: u8) -> Self {
        match (basis, bit) {
            (Basis::Z, 0) => Bb84State::H,
            (Basis::Z, _) => Bb84State::V,
            (Basis::X, 0) => Bb84State::Plus,
            (Basis::X, _) => Bb84State::Minus,
        }
    }

    pub fn basis(self) -> Basis {
        match self {
            Bb84State::H | Bb84State::V => Basis::Z,
            Bb84State::Plus | Bb84State::Minus => Basis::X,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Bb84State::H | Bb84State::Plus => 0,
            Bb84State::V | Bb84State::Minus => 1,
        }
    }

    /// Jones vector `(h, v)`; all four states are real.
    fn jones(self) -> [f64; 2] {
        match self {
            Bb84State::H => [1.0, 0.0],
            Bb84State::V => [0.0, 1.0],
            Bb84State::Plus => [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            Bb84State::Minus => [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        }
    }
}

/// Probabilities of the relay's three announcements.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BsmOutcome {
    pub psi_plus: f64,
    pub psi_minus: f64,
    pub fail: f64,
}

impl BsmOutcome {
    pub fn success(&self) -> f64 {
        self.psi_plus + self.psi_minus
    }

    pub fn total(&self) -> f64 {
        self.psi_plus + self.psi_minus + self.fail
    }

    fn add_scaled(&mut self, other: &BsmOutcome, w: f64) {
        self.psi_plus += w * other.psi_plus;
        self.psi_minus += w * other.psi_minus;
        self.fail += w * other.fail;
    }
}

/// Rotation of Bob's polarization by `theta` with `sin^2 theta = e_d`.
fn misalign(jones: [f64; 2], misalignment: f64) -> [f64; 2] {
    let s = misalignment.sqrt();
    let c = (1.0 - misalignment).sqrt();
    [c * jones[0] - s * jones[1], s * jones[0] + c * jones[1]]
}

/// Click-pattern announcement probabilities for one detector occupation mask.
fn classify_occupation(occupied: u8, dark: f64) -> BsmOutcome {
    let mut out = BsmOutcome::default();
    for clicks in 0u8..16 {
        if clicks & occupied != occupied {
            continue;
        }
        let extra = (clicks & !occupied).count_ones() as i32;
        let silent = 4 - clicks.count_ones() as i32;
        let p = dark.powi(extra) * (1.0 - dark).powi(silent);
        if PSI_PLUS_PATTERNS.contains(&clicks) {
            out.psi_plus += p;
        } else if PSI_MINUS_PATTERNS.contains(&clicks) {
            out.psi_minus += p;
        } else {
            out.fail += p;
        }
    }
    out
}

/// Lossless outcome for exactly `ka` photons from Alice and `kb` from Bob,
/// with relay dark counts folded in.
fn lossless_outcome(
    ka: usize,
    kb: usize,
    alice: Bb84State,
    bob: Bb84State,
    misalignment: f64,
    masks: &[BsmOutcome; 16],
) -> BsmOutcome {
    let s = FRAC_1_SQRT_2;
    let [ah, av] = alice.jones();
    let [bh, bv] = misalign(bob.jones(), misalignment);
    // a -> (c + d)/sqrt2, b -> (c - d)/sqrt2 on each polarization.
    let alice_op = [s * ah, s * av, s * ah, s * av];
    let bob_op = [s * bh, s * bv, -s * bh, -s * bv];
    let dist = CreationPoly::<4>::vacuum()
        .apply_n(&alice_op, ka)
        .apply_n(&bob_op, kb)
        .number_distribution(factorial(ka) * factorial(kb));

    let mut out = BsmOutcome::default();
    for (exps, p) in &dist {
        let occupied = exps.iter().enumerate().fold(0u8, |m, (i, &n)| if n > 0 { m | (1 << i) } else { m });
        out.add_scaled(&masks[occupied as usize], *p);
    }
    out
}

fn occupation_table(dark: f64) -> [BsmOutcome; 16] {
    let mut masks = [BsmOutcome::default(); 16];
    for (occ, slot) in masks.iter_mut().enumerate() {
        *slot = classify_occupation(occ as u8, dark);
    }
    masks
}

/// Outcome distribution of the relay for `m` photons from Alice and `n` from
/// Bob prepared in the given states, after loss, misalignment and dark
/// counts.
pub fn bsm_outcome_distribution(
    m: usize,
    n: usize,
    alice_state: Bb84State,
    bob_state: Bb84State,
    link: &LinkSpec,
) -> Result<BsmOutcome> {
    if m + n > link.photon_cap() {
        return Err(Error::Capacity { total: m + n, cap: link.photon_cap() });
    }
    let t = link.transmittance();
    let masks = occupation_table(link.relay_dark_rate());
    let (ta, tb) = (thin(m, t), thin(n, t));
    let mut out = BsmOutcome::default();
    for (ka, &wa) in ta.iter().enumerate() {
        for (kb, &wb) in tb.iter().enumerate() {
            let w = wa * wb;
            if w == 0.0 {
                continue;
            }
            let o = lossless_outcome(ka, kb, alice_state, bob_state, link.misalignment(), &masks);
            out.add_scaled(&o, w);
        }
    }
    Ok(out)
}

/// Precomputed lossless outcomes for every surviving photon pair up to the
/// cutoff. Distance only enters through binomial thinning, so one model
/// serves a whole distance sweep.
#[derive(Debug, Clone)]
pub struct BsmModel {
    cutoff: usize,
    // [basis][alice bit][bob bit][ka][kb]
    lossless: Vec<BsmOutcome>,
}

impl BsmModel {
    pub fn new(link: &LinkSpec) -> Result<Self> {
        let cutoff = link.cutoff();
        if 2 * cutoff > link.photon_cap() {
            return Err(Error::Capacity { total: 2 * cutoff, cap: link.photon_cap() });
        }
        let masks = occupation_table(link.relay_dark_rate());
        let side = cutoff + 1;
        let mut lossless = Vec::with_capacity(2 * 4 * side * side);
        for basis in [Basis::Z, Basis::X] {
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let (sa, sb) = (Bb84State::encode(basis, a), Bb84State::encode(basis, b));
                    for ka in 0..side {
                        for kb in 0..side {
                            lossless.push(lossless_outcome(ka, kb, sa, sb, link.misalignment(), &masks));
                        }
                    }
                }
            }
        }
        Ok(Self { cutoff, lossless })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn lossless(&self, basis: Basis, a: u8, b: u8, ka: usize, kb: usize) -> &BsmOutcome {
        let side = self.cutoff + 1;
        let bi = match basis {
            Basis::Z => 0,
            Basis::X => 1,
        };
        let idx = (((bi * 2 + a as usize) * 2 + b as usize) * side + ka) * side + kb;
        &self.lossless[idx]
    }

    /// Outcome for `m`, `n` emitted photons at per-side survival `t`.
    pub fn outcome(&self, basis: Basis, a: u8, b: u8, m: usize, n: usize, t: f64) -> BsmOutcome {
        let (ta, tb) = (thin(m, t), thin(n, t));
        let mut out = BsmOutcome::default();
        for (ka, &wa) in ta.iter().enumerate() {
            for (kb, &wb) in tb.iter().enumerate() {
                out.add_scaled(self.lossless(basis, a, b, ka, kb), wa * wb);
            }
        }
        out
    }
}
