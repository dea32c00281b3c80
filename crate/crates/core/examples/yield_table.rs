//! Ground-truth yields of the untrusted relay at a few distances.

use hsps_mdi::optics::{yield_table, Basis, LinkSpec};

fn main() -> hsps_mdi::Result<()> {
    let link = LinkSpec::default();
    println!("{:>6} {:>12} {:>10} {:>12} {:>10} {:>12}", "km", "Y11 Z", "e11 Z", "Y11 X", "e11 X", "Y00 Z");
    for km in [0.0, 50.0, 100.0, 200.0] {
        let at = link.at_distance(km)?;
        let z = yield_table(&at, Basis::Z)?;
        let x = yield_table(&at, Basis::X)?;
        println!(
            "{km:>6} {:>12.4e} {:>10.4} {:>12.4e} {:>10.4} {:>12.4e}",
            z.yield_at(1, 1),
            z.error_at(1, 1).unwrap_or(f64::NAN),
            x.yield_at(1, 1),
            x.error_at(1, 1).unwrap_or(f64::NAN),
            z.yield_at(0, 0),
        );
    }

    // Full table as CSV for one distance.
    yield_table(&link.at_distance(25.0)?, Basis::X)?.write_csv(std::io::stdout().lock())
}
