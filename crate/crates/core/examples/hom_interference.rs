//! Two-photon interference on a balanced beamsplitter.
//!
//! Run with `cargo run --example hom_interference`.

use hsps_mdi::optics::bs_output;

fn main() {
    for (j, k) in [(1, 0), (1, 1), (2, 1), (2, 2)] {
        println!("input |{j},{k}>");
        for ((a, b), p) in bs_output(j, k) {
            if p > 1e-15 {
                println!("  |{a},{b}>  {p:.6}");
            }
        }
    }
}
