//! Single-photon content of Poisson and thermal heralded sources.

use hsps_mdi::source::{DistributionKind, HeraldingDetector, SourceSpec, TriggerClass};

fn main() -> hsps_mdi::Result<()> {
    let det = HeraldingDetector::new(0.75, 1e-6)?;
    println!("{:>5} {:>10} {:>10} {:>12} {:>12}", "x", "P1 pois", "P1 therm", "trig P1", "non-trig P1");
    for x in [0.05, 0.1, 0.2, 0.5, 1.0] {
        let pois = SourceSpec::heralded(DistributionKind::Poisson, x, det, TriggerClass::Triggered)?;
        let therm = SourceSpec::heralded(DistributionKind::Thermal, x, det, TriggerClass::Triggered)?;
        let nt = pois.with_class(TriggerClass::NonTriggered)?;
        println!(
            "{x:>5} {:>10.5} {:>10.5} {:>12.5} {:>12.5}",
            pois.photon_weight(1),
            therm.photon_weight(1),
            pois.effective_weight(1),
            nt.effective_weight(1),
        );
    }

    let x = 0.5;
    let src = SourceSpec::heralded(DistributionKind::Poisson, x, det, TriggerClass::Triggered)?;
    let triggered: f64 = (0..=30).map(|n| src.effective_weight(n)).sum();
    println!("\nfraction of pulses triggered at x = {x}: {triggered:.5}");
    Ok(())
}
