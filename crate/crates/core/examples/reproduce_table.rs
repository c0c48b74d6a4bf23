//! Rerun a published delay table with the DCF simulator.
//!
//! `cargo run --release --example reproduce_table -- 2`

use wlan_delay::dcf_sim::RunSettings;
use wlan_delay::experiment::run_table;
use wlan_delay::DcfParams;

fn main() -> wlan_delay::Result<()> {
    let id = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(2);
    let settings = RunSettings {
        reps: 10,
        horizon: 1_000.0,
        ..RunSettings::default()
    };
    let report = run_table(id, None, &DcfParams::default(), settings)?;
    println!(
        "table {} (n={}), C={} vs computed {:.2}",
        report.id, report.n, report.capacity, report.computed_capacity
    );
    for row in &report.rows {
        let sim: Vec<String> = row
            .simulated
            .iter()
            .map(|c| format!("{:.1}", c.mean * 1e3))
            .collect();
        let analytic = row
            .analytic
            .map_or("unstable".to_string(), |d| format!("{:.2}", d * 1e3));
        println!(
            "{:?}: sim [{}] ms, published sim {:?}, analytic {analytic} (published {})",
            row.lambda,
            sim.join(", "),
            row.published_simulated_ms,
            row.published_analytic_ms
        );
    }
    Ok(())
}
