//! Bounds on the two-single-photon yield and phase error from simulated
//! gains, compared with the relay's true values.

use hsps_mdi::decoy::{decoy_conditions, e11_upper_bound, single_photon_gain, y11_lower_bound, GainTable, SourcePair};
use hsps_mdi::optics::{Basis, BsmModel, LinkSpec};
use hsps_mdi::source::{DistributionKind, HeraldingDetector, SourceSpec, TriggerClass};

fn main() -> hsps_mdi::Result<()> {
    let (eta, mu_prime) = (0.75, 0.4);
    let mu = (1.0 - eta) * mu_prime;
    let det = HeraldingDetector::new(eta, 1e-6)?;
    let source = |x, class| SourceSpec::heralded(DistributionKind::Poisson, x, det, class).map(SourcePair::symmetric);
    let weak = source(mu, TriggerClass::Triggered)?;
    let strong = source(mu_prime, TriggerClass::NonTriggered)?;

    let cond = decoy_conditions(&weak, &strong, 8);
    println!("k = {:.6}, D = {:.4e}, conditions hold: {}", cond.k_factor, cond.denominator, cond.ok());

    let link = LinkSpec::default();
    let model = BsmModel::new(&link)?;
    println!("{:>5} {:>12} {:>12} {:>9} {:>9}", "km", "Y11", "Y11 lower", "e11", "e11 upper");
    for km in [0.0, 50.0, 100.0, 150.0] {
        let t = link.at_distance(km)?.transmittance();
        let (z, x) = (model.yield_table(Basis::Z, t), model.yield_table(Basis::X, t));
        let mut gains = GainTable::new();
        for yt in [&z, &x] {
            gains.observe(yt, &weak)?;
            gains.observe(yt, &strong)?;
        }
        let y11z = y11_lower_bound(&gains, Basis::Z, &weak, &strong, 8)?;
        let y11x = y11_lower_bound(&gains, Basis::X, &weak, &strong, 8)?.value;
        let e11 = e11_upper_bound(
            &gains,
            &weak,
            &strong,
            single_photon_gain(&weak, y11x),
            single_photon_gain(&strong, y11x),
        )?;
        println!(
            "{km:>5} {:>12.4e} {:>12.4e} {:>9.4} {:>9.4}",
            z.yield_at(1, 1),
            y11z.value,
            x.error_at(1, 1).unwrap_or(f64::NAN),
            e11.value().unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
