//! Mean delay against per-node load for five nodes, up to the capacity edge.
//!
//! `cargo run --release --example load_sweep`

use wlan_delay::dcf_sim::{delay_vs_load_sweep, RunSettings};
use wlan_delay::DcfParams;

fn main() -> wlan_delay::Result<()> {
    let settings = RunSettings {
        reps: 10,
        horizon: 500.0,
        warmup: 20.0,
        ..RunSettings::default()
    };
    let grid = [1.0, 4.0, 8.0, 12.0, 13.0, 14.0, 14.6];
    for row in delay_vs_load_sweep(5, &grid, &DcfParams::default(), settings)? {
        match (row.simulated, row.analytic) {
            (Some(sim), Some(a)) => println!(
                "lambda={:5.1}: sim {:8.2} +/- {:6.2} ms, analytic {:8.2} ms",
                row.lambda,
                sim.mean * 1e3,
                sim.halfwidth * 1e3,
                a * 1e3
            ),
            _ => println!(
                "lambda={:5.1}: unstable (capacity {:.2} pkt/s)",
                row.lambda, row.capacity
            ),
        }
    }
    Ok(())
}
