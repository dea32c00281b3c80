//! Scenario scans over distance with per-point optimization of `mu'`.

mod config;
mod output;
mod scenario;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use config::{distance_range, parse_config, parse_distances, parse_scenarios, OptimizerSettings, ScanConfig};
pub use output::{emit_csv, emit_gnuplot, parse_csv};
pub use scenario::{Scenario, ScenarioKind, DEFAULT_HERALDING_EFFICIENCY};

use crate::error::Result;
use crate::keyrate::{rate_for_scenario, ChannelTables, RateSettings};
use crate::optics::{BsmModel, LinkSpec};

/// Why a point carries no key.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvalidReason {
    /// The weak/strong pair does not certify a `Y11` lower bound.
    DecoyConditions,
    /// No X-basis single-photon gain to divide by.
    NoPhaseErrorBound,
    NonPositiveRate,
}

/// One optimized (or evaluated) point of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub distance_km: f64,
    pub scenario: Scenario,
    pub mu: f64,
    pub mu_prime: f64,
    pub y11_bound: f64,
    pub e11_bound: f64,
    /// Zero when not `valid`.
    pub rate: f64,
    pub valid: bool,
    #[serde(skip)]
    pub reason: Option<InvalidReason>,
}

fn objective(p: &RatePoint) -> f64 {
    if p.valid {
        p.rate
    } else {
        f64::NEG_INFINITY
    }
}

/// Evaluates one scenario at `mu'`, with `mu` chosen by the scenario's policy.
pub fn evaluate(
    scenario: &Scenario,
    tables: &ChannelTables,
    mu_prime: f64,
    mu_fixed: f64,
    settings: &RateSettings,
) -> Result<RatePoint> {
    rate_for_scenario(scenario, tables, scenario.weak_intensity(mu_prime, mu_fixed), mu_prime, settings)
}

/// Maximizes the rate over `mu'`: a log-spaced grid, then golden-section
/// search between the grid neighbours of the best cell. When no point has a
/// positive rate the returned point is flagged invalid.
pub fn optimize_mu_prime(scenario: &Scenario, tables: &ChannelTables, config: &ScanConfig) -> Result<RatePoint> {
    let settings = config.rate_settings();
    let opt = config.optimizer;
    let eval = |x: f64| evaluate(scenario, tables, x, config.mu_fixed, &settings);

    let n = opt.grid_points.max(3);
    let ratio = (opt.upper / opt.lower).ln();
    let grid: Vec<f64> = (0..n).map(|i| opt.lower * (ratio * i as f64 / (n - 1) as f64).exp()).collect();
    let mut points = Vec::with_capacity(n);
    for &x in &grid {
        points.push(eval(x)?);
    }
    let best_i = (0..n).fold(0, |b, i| if objective(&points[i]) > objective(&points[b]) { i } else { b });
    let mut best = points[best_i];
    if !best.valid {
        return Ok(best);
    }

    let (mut a, mut b) = (grid[best_i.saturating_sub(1)], grid[(best_i + 1).min(n - 1)]);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut pc = eval(c)?;
    let mut pd = eval(d)?;
    while (b - a) > opt.rel_tol * 0.5 * (a + b) {
        if objective(&pc) >= objective(&pd) {
            b = d;
            d = c;
            pd = pc;
            c = b - inv_phi * (b - a);
            pc = eval(c)?;
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + inv_phi * (b - a);
            pd = eval(d)?;
        }
    }
    for p in [pc, pd] {
        if objective(&p) > objective(&best) {
            best = p;
        }
    }
    Ok(best)
}

/// Yield tables for every distance of a link; the relay model is built once.
pub fn channel_tables(link: &LinkSpec, distances: &[f64]) -> Result<Vec<ChannelTables>> {
    let model = BsmModel::new(link)?;
    distances.par_iter().map(|&km| Ok(ChannelTables::new(&model, km, link.at_distance(km)?.transmittance()))).collect()
}

/// Optimized points for every scenario and distance, ordered by scenario
/// (as listed in the config) and then by distance.
pub fn scan(config: &ScanConfig) -> Result<Vec<RatePoint>> {
    let tables = channel_tables(&config.link, &config.distances)?;
    let jobs: Vec<(&Scenario, &ChannelTables)> =
        config.scenarios.iter().flat_map(|s| tables.iter().map(move |t| (s, t))).collect();
    jobs.par_iter().map(|(s, t)| optimize_mu_prime(s, t, config)).collect()
}

/// Largest distance with a positive rate for `scenario`.
pub fn cutoff_distance(points: &[RatePoint], scenario: &Scenario) -> Option<f64> {
    points
        .iter()
        .filter(|p| p.scenario == *scenario && p.valid && p.rate > 0.0)
        .map(|p| p.distance_km)
        .fold(None, |acc, d| Some(acc.map_or(d, |a: f64| a.max(d))))
}
