use std::io::{Read, Write};

use super::RatePoint;
use crate::error::Result;

/// CSV with header `distance_km,scenario,mu,mu_prime,y11_bound,e11_bound,rate,valid`.
/// Floats are written in their shortest round-trip form.
pub fn emit_csv<W: Write>(points: &[RatePoint], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    if points.is_empty() {
        w.write_record(["distance_km", "scenario", "mu", "mu_prime", "y11_bound", "e11_bound", "rate", "valid"])?;
    }
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads what [`emit_csv`] writes. Invalid points come back without a reason.
pub fn parse_csv<R: Read>(source: R) -> Result<Vec<RatePoint>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
    let mut out = Vec::new();
    for p in r.deserialize() {
        out.push(p?);
    }
    Ok(out)
}

/// Whitespace-separated columns, one block per scenario, blocks separated by
/// two blank lines so that gnuplot's `index` selects them.
pub fn emit_gnuplot<W: Write>(points: &[RatePoint], mut sink: W) -> Result<()> {
    let mut current = None;
    for p in points {
        if current != Some(p.scenario) {
            if current.is_some() {
                writeln!(sink, "\n")?;
            }
            writeln!(sink, "# {}", p.scenario)?;
            writeln!(sink, "# distance_km mu mu_prime y11_bound e11_bound rate valid")?;
            current = Some(p.scenario);
        }
        writeln!(
            sink,
            "{:?} {:?} {:?} {:?} {:?} {:?} {}",
            p.distance_km,
            p.mu,
            p.mu_prime,
            p.y11_bound,
            p.e11_bound,
            p.rate,
            u8::from(p.valid)
        )?;
    }
    sink.flush()?;
    Ok(())
}
