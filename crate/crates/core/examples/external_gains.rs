//! Running the estimator on gain records from a file, as one would with
//! measured data. The records here are simulated and written first.

use std::fs::File;

use hsps_mdi::decoy::GainTable;
use hsps_mdi::keyrate::{rate_from_gains, simulated_gains};
use hsps_mdi::runner::{channel_tables, ScanConfig, Scenario, ScenarioKind};

fn main() -> hsps_mdi::Result<()> {
    let cfg = ScanConfig::default();
    let settings = cfg.rate_settings();
    let h1 = Scenario::new(ScenarioKind::H1, 0.75)?;
    let (mu, mu_prime) = (0.075, 0.3);

    let tables = channel_tables(&cfg.link, &[80.0])?;
    let path = std::env::temp_dir().join("hsps_mdi_gains.csv");
    simulated_gains(&h1, &tables[0], mu, mu_prime, settings.heralding_dark)?.write_csv(File::create(&path)?)?;
    println!("wrote {}", path.display());

    let gains = GainTable::read_csv(File::open(&path)?)?;
    for rec in gains.records() {
        println!(
            "  {} x={:<6} y={:<6} {:<3} S={:.4e} E={:.4}",
            rec.basis, rec.alice_intensity, rec.bob_intensity, rec.trigger_class, rec.gain, rec.qber
        );
    }
    let p = rate_from_gains(&h1, &gains, None, mu, mu_prime, cfg.link.cutoff(), &settings)?;
    println!("Y11 >= {:.4e}, e11 <= {:.4}, rate {:.4e}", p.y11_bound, p.e11_bound, p.rate);
    Ok(())
}
