//! Mean delay against the number of nodes at 10 pkt/s each.
//!
//! `cargo run --release --example n_sweep`

use wlan_delay::dcf_sim::{delay_vs_n_sweep, RunSettings};
use wlan_delay::DcfParams;

fn main() -> wlan_delay::Result<()> {
    let settings = RunSettings {
        reps: 10,
        horizon: 500.0,
        warmup: 20.0,
        ..RunSettings::default()
    };
    for row in delay_vs_n_sweep(10.0, &[2, 3, 4, 5, 6, 7], &DcfParams::default(), settings)? {
        let sim = row
            .simulated
            .map_or("-".into(), |c| format!("{:.2} ms", c.mean * 1e3));
        let analytic = row
            .analytic
            .map_or("unstable".into(), |a| format!("{:.2} ms", a * 1e3));
        println!(
            "n={}: C={:.2} sim {sim} analytic {analytic}",
            row.n, row.capacity
        );
    }
    Ok(())
}
