//! Scans driven by a `key = value` configuration, written as CSV.

use hsps_mdi::runner::{emit_csv, parse_config, scan};

const CONFIG: &str = "
# heralding efficiency 0.9, except for the triggered-only scenario
eta_heralding = 0.9
scenarios = W0, H0, H1, H2@0.75
distances = 0:200:40
";

fn main() -> hsps_mdi::Result<()> {
    let cfg = parse_config(CONFIG.as_bytes())?;
    emit_csv(&scan(&cfg)?, std::io::stdout().lock())
}
