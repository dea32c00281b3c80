//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hsps_mdi::decoy::{
    decoy_conditions, e11_upper_bound, kappa, single_photon_gain, symmetric_condition, vacuum_adjusted,
    y11_lower_bound, GainTable, SourcePair,
};
use hsps_mdi::keyrate::{rate_for_scenario, ChannelTables};
use hsps_mdi::optics::{bs_output, Basis, BsmModel, LinkSpec};
use hsps_mdi::runner::{cutoff_distance, emit_csv, parse_csv, scan, RatePoint, ScanConfig, Scenario, ScenarioKind};
use hsps_mdi::source::{DistributionKind, HeraldingDetector, SourceSpec, TriggerClass};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn heralded(kind: DistributionKind, x: f64, eta: f64, dark: f64, class: TriggerClass) -> SourcePair {
    let det = HeraldingDetector::new(eta, dark).unwrap();
    SourcePair::symmetric(SourceSpec::heralded(kind, x, det, class).unwrap())
}

fn hom() -> Outcome {
    let start = Instant::now();
    let out = bs_output(1, 1);
    let elapsed = start.elapsed();
    let p = |k: (usize, usize)| out.get(&k).copied().unwrap_or(0.0);
    let ok = p((1, 1)).abs() < 1e-12 && (p((2, 0)) - 0.5).abs() < 1e-12 && (p((0, 2)) - 0.5).abs() < 1e-12;
    outcome(
        ok && elapsed < Duration::from_millis(1),
        format!("P(1,1)={:e} P(2,0)={} P(0,2)={} in {elapsed:?}", p((1, 1)), p((2, 0)), p((0, 2))),
    )
}

fn identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // Misalignment and relay dark counts fix the relay model; distance and
    // detector efficiency only enter through the per-side transmittance.
    let models: Vec<BsmModel> = (0..6)
        .map(|_| {
            let link = LinkSpec::builder()
                .relay_dark_rate(rng.gen_range(0.0..1e-5))
                .misalignment(rng.gen_range(0.0..0.1))
                .build()
                .unwrap();
            BsmModel::new(&link).unwrap()
        })
        .collect();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    while points < 240 {
        let model = &models[rng.gen_range(0..models.len())];
        let km = rng.gen_range(0.0..250.0);
        let link = LinkSpec::builder().distance_km(km).relay_efficiency(rng.gen_range(0.05..1.0)).build().unwrap();
        let tables = ChannelTables::new(model, km, link.transmittance());
        let kind = if rng.gen_bool(0.5) { DistributionKind::Poisson } else { DistributionKind::Thermal };
        let eta = rng.gen_range(0.3..0.99);
        let dark = rng.gen_range(0.0..1e-5);
        let mu_prime = rng.gen_range(0.05..1.0);
        let mu = rng.gen_range(0.01..mu_prime);
        let (weak, strong) = match rng.gen_range(0..3) {
            0 => (
                heralded(kind, mu, eta, dark, TriggerClass::Triggered),
                heralded(kind, mu_prime, eta, dark, TriggerClass::NonTriggered),
            ),
            1 => (
                heralded(kind, mu, eta, dark, TriggerClass::Triggered),
                heralded(kind, mu_prime, eta, dark, TriggerClass::Triggered),
            ),
            _ => (
                SourcePair::symmetric(SourceSpec::coherent(mu).unwrap()),
                SourcePair::symmetric(SourceSpec::coherent(mu_prime).unwrap()),
            ),
        };
        let mut gains = GainTable::new();
        gains.observe(&tables.z, &weak).unwrap();
        gains.observe(&tables.z, &strong).unwrap();
        let cond = decoy_conditions(&weak, &strong, tables.cutoff());
        let d_weak = vacuum_adjusted(&gains, Basis::Z, &weak, false).unwrap();
        let d_strong = vacuum_adjusted(&gains, Basis::Z, &strong, false).unwrap();
        let numerator = cond.k_factor * d_weak - d_strong;
        let reconstructed = (numerator + kappa(&weak, &strong, cond.k_factor, &tables.z)) / cond.denominator;
        worst = worst.max((reconstructed - tables.z.yield_at(1, 1)).abs());
        points += 1;
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-8 && elapsed < Duration::from_secs(60),
        format!("{points} random points, max |Y11 - (N + K)/D| = {worst:e}, {elapsed:.1?}"),
    )
}

fn soundness() -> Outcome {
    let base = LinkSpec::default();
    let model = BsmModel::new(&base).unwrap();
    let (mut checked, mut y_viol, mut e_viol, mut e_checked) = (0, 0, 0, 0);
    let mut y_margin = f64::INFINITY;
    for km in (0..=250).step_by(25).map(f64::from) {
        let tables = ChannelTables::new(&model, km, base.at_distance(km).unwrap().transmittance());
        let true_y = tables.z.yield_at(1, 1);
        let true_y_x = tables.x.yield_at(1, 1);
        let true_e = tables.x.error_at(1, 1).unwrap();
        for eta in [0.5, 0.75, 0.9, 1.0] {
            for i in 1..=10 {
                let mu_prime = 0.1 * f64::from(i);
                let mu = (1.0 - eta) * mu_prime;
                let weak = heralded(DistributionKind::Poisson, mu, eta, 1e-6, TriggerClass::Triggered);
                let strong = heralded(DistributionKind::Poisson, mu_prime, eta, 1e-6, TriggerClass::NonTriggered);
                let mut gains = GainTable::new();
                for yt in [&tables.z, &tables.x] {
                    gains.observe(yt, &weak).unwrap();
                    gains.observe(yt, &strong).unwrap();
                }
                let bz = y11_lower_bound(&gains, Basis::Z, &weak, &strong, tables.cutoff()).unwrap();
                let Some(yz) = bz.lower_bound() else { continue };
                checked += 1;
                y_margin = y_margin.min(true_y - yz);
                if yz > true_y + 1e-12 {
                    y_viol += 1;
                }
                let bx = y11_lower_bound(&gains, Basis::X, &weak, &strong, tables.cutoff()).unwrap();
                let Some(yx) = bx.lower_bound() else { continue };
                if yx > true_y_x + 1e-12 {
                    y_viol += 1;
                }
                let e = e11_upper_bound(
                    &gains,
                    &weak,
                    &strong,
                    single_photon_gain(&weak, yx),
                    single_photon_gain(&strong, yx),
                )
                .unwrap();
                if let Some(e) = e.value() {
                    e_checked += 1;
                    if e < true_e - 1e-12 {
                        e_viol += 1;
                    }
                }
            }
        }
    }
    outcome(
        y_viol == 0 && e_viol == 0 && checked > 0,
        format!(
            "{checked} Y11 bounds ({y_viol} violations, min slack {y_margin:e}), {e_checked} e11 bounds ({e_viol} violations)"
        ),
    )
}

fn condition_equivalence() -> Outcome {
    let (mut total, mut disagree) = (0, Vec::new());
    for eta in [0.5, 0.75, 0.9] {
        for i in 1..=20 {
            let mu_prime = 0.05 * f64::from(i);
            for f in [0.5, 0.9, 0.99, 0.999_999, 1.0, 1.000_001, 1.01, 1.1, 2.0] {
                let mu = (1.0 - eta) * mu_prime * f;
                let weak = heralded(DistributionKind::Poisson, mu, eta, 1e-6, TriggerClass::Triggered);
                let strong = heralded(DistributionKind::Poisson, mu_prime, eta, 1e-6, TriggerClass::NonTriggered);
                let coefficient_wise = decoy_conditions(&weak, &strong, 8).negative_form();
                total += 1;
                if coefficient_wise != symmetric_condition(mu, mu_prime, eta) {
                    disagree.push(format!("(eta={eta}, mu'={mu_prime}, mu={mu})"));
                }
            }
        }
    }
    outcome(disagree.is_empty(), format!("{total} grid points, {} disagreements {:?}", disagree.len(), disagree))
}

fn rates_of(points: &[RatePoint], kind: ScenarioKind) -> Vec<&RatePoint> {
    points.iter().filter(|p| p.scenario.kind() == kind).collect()
}

fn finding_close_to_asymptotic(points: &[RatePoint], elapsed: Duration) -> Outcome {
    let (h0, h1) = (rates_of(points, ScenarioKind::H0), rates_of(points, ScenarioKind::H1));
    let mut gap: f64 = 0.0;
    for (a, b) in h0.iter().zip(&h1) {
        if a.rate > 0.0 {
            gap = gap.max((a.rate - b.rate) / a.rate);
        }
    }
    let c0 = cutoff_distance(points, &h0[0].scenario).unwrap_or(0.0);
    let c1 = cutoff_distance(points, &h1[0].scenario).unwrap_or(0.0);
    outcome(
        gap < 0.5 && (c0 - c1).abs() <= 15.0 && elapsed < Duration::from_secs(300),
        format!("max relative gap {gap:.4}, cutoff H0 {c0} km, H1 {c1} km, full scan {elapsed:.1?}"),
    )
}

fn finding_longer_than_wcs(points: &[RatePoint]) -> Outcome {
    let cutoff = |k| cutoff_distance(points, &rates_of(points, k)[0].scenario).unwrap_or(0.0);
    let (h1, w0) = (cutoff(ScenarioKind::H1), cutoff(ScenarioKind::W0));
    outcome(h1 > w0, format!("cutoff H1 {h1} km vs W0 {w0} km (H1 may be limited by the 300 km scan range)"))
}

fn dominates(points: &[RatePoint], hi: ScenarioKind, lo: ScenarioKind, both_valid: bool) -> (usize, Vec<f64>) {
    let (a, b) = (rates_of(points, hi), rates_of(points, lo));
    let mut compared = 0;
    let mut bad = Vec::new();
    for (p, q) in a.iter().zip(&b) {
        if both_valid && !(p.valid && q.valid) {
            continue;
        }
        compared += 1;
        if p.rate < q.rate {
            bad.push(p.distance_km);
        }
    }
    (compared, bad)
}

fn finding_both_classes(points: &[RatePoint]) -> Outcome {
    let (n, bad) = dominates(points, ScenarioKind::H1, ScenarioKind::H2, true);
    outcome(bad.is_empty() && n > 0, format!("{n} distances compared, H1 < H2 at {bad:?}"))
}

fn finding_poisson_beats_thermal(points: &[RatePoint]) -> Outcome {
    let (n0, bad0) = dominates(points, ScenarioKind::H0, ScenarioKind::T0, false);
    let (n1, bad1) = dominates(points, ScenarioKind::H1, ScenarioKind::T1, false);
    outcome(
        bad0.is_empty() && bad1.is_empty(),
        format!("{n0} + {n1} distances compared, H0 < T0 at {bad0:?}, H1 < T1 at {bad1:?}"),
    )
}

fn zero_error_limit() -> Outcome {
    let link = LinkSpec::builder().misalignment(0.0).relay_dark_rate(0.0).build().unwrap();
    let cfg = ScanConfig { link, ..ScanConfig::default() };
    let settings = cfg.rate_settings();
    let model = BsmModel::new(&link).unwrap();
    let (mut max_e11, mut max_qber): (f64, f64) = (0.0, 0.0);
    for &km in &cfg.distances {
        let tables = ChannelTables::new(&model, km, link.at_distance(km).unwrap().transmittance());
        for kind in [ScenarioKind::H1, ScenarioKind::H2, ScenarioKind::W1, ScenarioKind::T1] {
            let sc = Scenario::new(kind, 0.75).unwrap();
            let mu_prime = 0.5;
            let p = rate_for_scenario(&sc, &tables, sc.weak_intensity(mu_prime, cfg.mu_fixed), mu_prime, &settings)
                .unwrap();
            max_e11 = max_e11.max(p.e11_bound);
            let key = sc.key_pair(mu_prime, settings.heralding_dark).unwrap();
            let mut g = GainTable::new();
            g.observe(&tables.z, &key).unwrap();
            max_qber = max_qber.max(g.require(Basis::Z, mu_prime, mu_prime, key.class()).unwrap().qber);
        }
    }
    outcome(
        max_e11 < 1e-9 && max_qber < 1e-9,
        format!(
            "max e11 upper bound {max_e11:e}, max Z QBER {max_qber:e}; finite-decoy e11 keeps multi-photon X errors"
        ),
    )
}

fn determinism() -> Outcome {
    let cfg = ScanConfig { distances: (0..=300).step_by(25).map(f64::from).collect(), ..ScanConfig::default() };
    let render = || {
        let mut buf = Vec::new();
        emit_csv(&scan(&cfg).unwrap(), &mut buf).unwrap();
        buf
    };
    let (first, second) = (render(), render());
    let parsed = parse_csv(first.as_slice()).unwrap();
    let mut again = Vec::new();
    emit_csv(&parsed, &mut again).unwrap();
    let original = scan(&cfg).unwrap();
    let values_equal = parsed.len() == original.len()
        && parsed.iter().zip(&original).all(|(a, b)| RatePoint { reason: None, ..*b } == *a);
    outcome(
        first == second && first == again && values_equal,
        format!("{} rows, byte-identical runs: {}, exact round-trip: {}", parsed.len(), first == second, values_equal),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let default_scan = scan(&ScanConfig::default()).expect("default scan");
    let scan_time = start.elapsed();

    let results = [
        ("1 Hong-Ou-Mandel", hom()),
        ("2 yield identity", identity()),
        ("3 bound soundness", soundness()),
        ("4 condition equivalence", condition_equivalence()),
        ("5 close to asymptotic", finding_close_to_asymptotic(&default_scan, scan_time)),
        ("6 longer than WCS", finding_longer_than_wcs(&default_scan)),
        ("7 both classes beat triggered only", finding_both_classes(&default_scan)),
        ("8 Poisson beats thermal", finding_poisson_beats_thermal(&default_scan)),
        ("9 zero-error limit", zero_error_limit()),
        ("10 determinism and round-trip", determinism()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("[{}] criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
