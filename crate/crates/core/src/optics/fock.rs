//! Exact Fock-state arithmetic for passive linear optics.
//!
//! A state is stored as a polynomial in creation operators acting on the
//! vacuum. Input photons are created by linear combinations of output-mode
//! operators, so the output state is the expanded product and the amplitude
//! of `|n_1..n_M>` is `coeff * sqrt(prod n_i!)`.

use std::collections::BTreeMap;

/// Polynomial in `M` commuting creation operators.
#[derive(Debug, Clone)]
pub(crate) struct CreationPoly<const M: usize> {
    terms: BTreeMap<[u8; M], f64>,
}

impl<const M: usize> CreationPoly<M> {
    pub(crate) fn vacuum() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert([0u8; M], 1.0);
        Self { terms }
    }

    /// Multiply by the linear form `sum_i coeffs[i] * a_i^dagger`.
    pub(crate) fn apply(&self, coeffs: &[f64; M]) -> Self {
        let mut terms = BTreeMap::new();
        for (exps, c) in &self.terms {
            for (mode, &w) in coeffs.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let mut e = *exps;
                e[mode] += 1;
                *terms.entry(e).or_insert(0.0) += c * w;
            }
        }
        Self { terms }
    }

    pub(crate) fn apply_n(&self, coeffs: &[f64; M], times: usize) -> Self {
        (0..times).fold(self.clone(), |p, _| p.apply(coeffs))
    }

    /// Photon-number distribution, given the normalization `1/sqrt(prod k!)`
    /// of the input Fock states (`input_norm_sq = prod k!`).
    pub(crate) fn number_distribution(&self, input_norm_sq: f64) -> BTreeMap<[u8; M], f64> {
        self.terms
            .iter()
            .map(|(exps, c)| {
                let fact: f64 = exps.iter().map(|&n| factorial(n as usize)).product();
                (*exps, c * c * fact / input_norm_sq)
            })
            .filter(|(_, p)| *p > 0.0)
            .collect()
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Binomial thinning of an `m`-photon Fock state: entry `k` is the
/// probability that exactly `k` photons survive.
pub fn thin(m: usize, survival: f64) -> Vec<f64> {
    (0..=m)
        .map(|k| {
            let lost = m - k;
            let pk = if k == 0 { 1.0 } else { survival.powi(k as i32) };
            let pl = if lost == 0 { 1.0 } else { (1.0 - survival).powi(lost as i32) };
            binomial(m, k) * pk * pl
        })
        .collect()
}

/// Output distribution of a lossless 50/50 beamsplitter fed with `|j>|k>` in
/// a single polarization mode. Keys are `(p, q)` with `p + q = j + k`.
pub fn bs_output(j: usize, k: usize) -> BTreeMap<(usize, usize), f64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let poly = CreationPoly::<2>::vacuum().apply_n(&[s, s], j).apply_n(&[s, -s], k);
    poly.number_distribution(factorial(j) * factorial(k))
        .into_iter()
        .map(|(e, p)| ((e[0] as usize, e[1] as usize), p))
        .collect()
}
