use std::io::Read;

use crate::error::{Error, Result};
use crate::keyrate::{QFactor, RateSettings, DEFAULT_F_EC};
use crate::optics::LinkSpec;
use crate::source::HeraldingDetector;

use super::{Scenario, ScenarioKind, DEFAULT_HERALDING_EFFICIENCY};

/// Coarse grid plus golden-section refinement over `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerSettings {
    pub grid_points: usize,
    pub lower: f64,
    pub upper: f64,
    pub rel_tol: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings { grid_points: 60, lower: 1e-4, upper: 1.5, rel_tol: 1e-4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub link: LinkSpec,
    pub distances: Vec<f64>,
    pub scenarios: Vec<Scenario>,
    /// Default heralding detector; a scenario's own efficiency overrides it.
    pub heralding: HeraldingDetector,
    pub f_ec: f64,
    pub q_factor: QFactor,
    /// Weak intensity of the scenarios that do not couple it to `mu'`.
    pub mu_fixed: f64,
    pub optimizer: OptimizerSettings,
}

impl Default for ScanConfig {
    fn default() -> Self {
        let eta = DEFAULT_HERALDING_EFFICIENCY;
        ScanConfig {
            link: LinkSpec::default(),
            distances: distance_range(0.0, 300.0, 5.0).expect("valid default range"),
            scenarios: ScenarioKind::ALL.iter().map(|&k| Scenario::new(k, eta).expect("valid default")).collect(),
            heralding: HeraldingDetector::new(eta, 1e-6).expect("valid default"),
            f_ec: DEFAULT_F_EC,
            q_factor: QFactor::SinglePhotonTrigger,
            mu_fixed: 0.1,
            optimizer: OptimizerSettings::default(),
        }
    }
}

impl ScanConfig {
    pub fn rate_settings(&self) -> RateSettings {
        RateSettings { f_ec: self.f_ec, q_factor: self.q_factor, heralding_dark: self.heralding.dark_rate() }
    }
}

/// `start, start + step, ...` up to and including `stop`.
pub fn distance_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start >= 0.0 && stop.is_finite() && step > 0.0) {
        return Err(Error::Domain(format!("bad distance range {start}:{stop}:{step}")));
    }
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let d = start + f64::from(i) * step;
        if d > stop + 1e-9 * step {
            break;
        }
        out.push(d);
        i += 1;
    }
    Ok(out)
}

/// Either `START:STOP:STEP` or a comma-separated list.
pub fn parse_distances(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Domain(format!("bad number `{t}`")));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, c] => distance_range(num(a)?, num(b)?, num(c)?),
        [_] => {
            let v = s.split(',').map(num).collect::<Result<Vec<_>>>()?;
            if v.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
                return Err(Error::Domain(format!("negative distance in `{s}`")));
            }
            Ok(v)
        }
        _ => Err(Error::Domain(format!("bad distance spec `{s}`"))),
    }
}

/// Comma-separated scenario labels; bare labels take `default_eta`.
pub fn parse_scenarios(s: &str, default_eta: f64) -> Result<Vec<Scenario>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| Scenario::parse(t, default_eta)).collect()
}

/// Reads a `key = value` file. `#` starts a comment; unknown keys are an
/// error.
pub fn parse_config<R: Read>(mut source: R) -> Result<ScanConfig> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let mut cfg = ScanConfig::default();
    let mut link = cfg.link.to_builder();
    let (mut eta_h, mut dark_h) = (cfg.heralding.efficiency(), cfg.heralding.dark_rate());
    let mut scenarios: Option<(usize, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse { line: line_no, msg: format!("expected `key = value`, got `{line}`") });
        };
        let (key, value) = (key.trim(), value.trim());
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::Parse { line: line_no, msg: format!("`{key}`: not a number: `{value}`") })
        };
        let int = || {
            value
                .parse::<usize>()
                .map_err(|_| Error::Parse { line: line_no, msg: format!("`{key}`: not an integer: `{value}`") })
        };
        let bad = |msg: &str| Error::Value { key: key.to_string(), msg: msg.to_string() };
        let prob = |v: f64| if (0.0..=1.0).contains(&v) { Ok(v) } else { Err(bad("must lie in [0, 1]")) };
        match key {
            "alpha" => {
                let v = num()?;
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(bad("must be finite and >= 0"));
                }
                link = link.attenuation_db_per_km(v);
            }
            "e_d" => link = link.misalignment(prob(num()?)?),
            "d_c" => link = link.relay_dark_rate(prob(num()?)?),
            "eta_c" => link = link.relay_efficiency(prob(num()?)?),
            "cutoff" => {
                let v = int()?;
                if v < 2 {
                    return Err(bad("must be at least 2"));
                }
                link = link.cutoff(v);
            }
            "photon_cap" => link = link.photon_cap(int()?),
            "eta_heralding" => {
                let v = num()?;
                if !(v > 0.0 && v <= 1.0) {
                    return Err(bad("must lie in (0, 1]"));
                }
                eta_h = v;
            }
            "d_heralding" => dark_h = prob(num()?)?,
            "f" => {
                let v = num()?;
                if !(v >= 1.0 && v.is_finite()) {
                    return Err(bad("must be >= 1"));
                }
                cfg.f_ec = v;
            }
            "q_factor" => {
                cfg.q_factor = match value {
                    "trigger" => QFactor::SinglePhotonTrigger,
                    "unity" => QFactor::Unity,
                    _ => return Err(bad("expected `trigger` or `unity`")),
                }
            }
            "mu_fixed" => {
                let v = num()?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(bad("must be positive"));
                }
                cfg.mu_fixed = v;
            }
            "grid_points" => {
                let v = int()?;
                if v < 3 {
                    return Err(bad("must be at least 3"));
                }
                cfg.optimizer.grid_points = v;
            }
            "refine_tol" => {
                let v = num()?;
                if !(v > 0.0 && v < 1.0) {
                    return Err(bad("must lie in (0, 1)"));
                }
                cfg.optimizer.rel_tol = v;
            }
            "mu_min" => cfg.optimizer.lower = num()?,
            "mu_max" => cfg.optimizer.upper = num()?,
            "distances" => cfg.distances = parse_distances(value).map_err(|e| bad(&e.to_string()))?,
            "scenarios" => scenarios = Some((line_no, value.to_string())),
            _ => return Err(Error::Parse { line: line_no, msg: format!("unknown key `{key}`") }),
        }
    }

    let o = cfg.optimizer;
    if !(o.lower > 0.0 && o.upper > o.lower && o.upper.is_finite()) {
        return Err(Error::Value { key: "mu_min/mu_max".into(), msg: format!("need 0 < {} < {}", o.lower, o.upper) });
    }
    cfg.link = link.build().map_err(|e| Error::Value { key: "link".into(), msg: e.to_string() })?;
    cfg.heralding = HeraldingDetector::new(eta_h, dark_h)?;
    cfg.scenarios = match scenarios {
        Some((_, list)) => {
            parse_scenarios(&list, eta_h).map_err(|e| Error::Value { key: "scenarios".into(), msg: e.to_string() })?
        }
        None => ScenarioKind::ALL.iter().map(|&k| Scenario::new(k, eta_h)).collect::<Result<_>>()?,
    };
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_gives_defaults() {
        let cfg = parse_config("".as_bytes()).unwrap();
        assert_eq!(cfg, ScanConfig::default());
        assert_eq!(cfg.distances.len(), 61);
        assert_eq!(cfg.link.attenuation_db_per_km(), 0.2);
        assert_eq!(cfg.link.misalignment(), 0.015);
        assert_eq!(cfg.link.relay_dark_rate(), 3e-6);
        assert_eq!(cfg.link.relay_efficiency(), 0.145);
        assert_eq!(cfg.heralding.efficiency(), 0.75);
        assert_eq!(cfg.heralding.dark_rate(), 1e-6);
        assert_eq!((cfg.f_ec, cfg.link.cutoff()), (1.16, 8));
    }

    #[test]
    fn heralding_efficiency_applies_to_bare_scenarios() {
        let cfg = parse_config("scenarios = H1, H2@0.75, W0\neta_heralding = 0.9\n".as_bytes()).unwrap();
        assert_eq!(cfg.heralding.efficiency(), 0.9);
        let labels: Vec<String> = cfg.scenarios.iter().map(|s| s.to_string()).collect();
        assert_eq!(labels, ["H1@0.9", "H2@0.75", "W0"]);
    }

    #[test]
    fn errors_name_the_line_or_key() {
        match parse_config("# comment\n\nalpha = -1\n".as_bytes()) {
            Err(Error::Value { key, .. }) => assert_eq!(key, "alpha"),
            other => panic!("{other:?}"),
        }
        match parse_config("e_d = 0.01\nbogus = 3\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config("alpha 0.2".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_config("e_d = 2".as_bytes()), Err(Error::Value { .. })));
    }

    #[test]
    fn distance_specs() {
        assert_eq!(parse_distances("0:100:50").unwrap(), vec![0.0, 50.0, 100.0]);
        assert_eq!(parse_distances("10, 20.5").unwrap(), vec![10.0, 20.5]);
        assert!(parse_distances("").unwrap().is_empty());
        assert!(parse_distances("0:10:0").is_err());
        assert_eq!(distance_range(0.0, 0.3, 0.1).unwrap().len(), 4);
    }
}
