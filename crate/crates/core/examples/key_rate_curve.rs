//! Optimized key rate against distance for coherent, Poisson and thermal
//! sources, with infinite and finite decoy sets.

use hsps_mdi::runner::{cutoff_distance, distance_range, scan, ScanConfig};

fn main() -> hsps_mdi::Result<()> {
    let cfg = ScanConfig { distances: distance_range(0.0, 300.0, 50.0)?, ..ScanConfig::default() };
    let points = scan(&cfg)?;

    print!("{:>6}", "km");
    for sc in &cfg.scenarios {
        print!(" {:>11}", sc.to_string());
    }
    println!();
    for (i, km) in cfg.distances.iter().enumerate() {
        print!("{km:>6}");
        for s in 0..cfg.scenarios.len() {
            print!(" {:>11.3e}", points[s * cfg.distances.len() + i].rate);
        }
        println!();
    }
    for sc in &cfg.scenarios {
        let cutoff = cutoff_distance(&points, sc).map_or("none".to_string(), |d| format!("{d} km"));
        println!("{sc}: last positive distance {cutoff}");
    }
    Ok(())
}
