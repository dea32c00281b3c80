//! Optimal signal intensity per distance. Heralded sources tolerate a much
//! brighter signal than weak coherent pulses.

use hsps_mdi::runner::{channel_tables, optimize_mu_prime, ScanConfig, Scenario, ScenarioKind};

fn main() -> hsps_mdi::Result<()> {
    let cfg = ScanConfig::default();
    let scenarios = [
        Scenario::new(ScenarioKind::W1, 0.75)?,
        Scenario::new(ScenarioKind::H1, 0.9)?,
        Scenario::new(ScenarioKind::H2, 0.75)?,
    ];
    let distances = [0.0, 50.0, 100.0, 150.0];
    let tables = channel_tables(&cfg.link, &distances)?;
    println!("{:>6} {:>10} {:>8} {:>8} {:>11}", "km", "scenario", "mu", "mu'", "rate");
    for t in &tables {
        for sc in &scenarios {
            let p = optimize_mu_prime(sc, t, &cfg)?;
            println!("{:>6} {:>10} {:>8.4} {:>8.4} {:>11.3e}", p.distance_km, sc.to_string(), p.mu, p.mu_prime, p.rate);
        }
    }
    Ok(())
}
