//! Polling simulator against the closed form, 30 replications.
//!
//! `cargo run --release --example polling_sim`

use wlan_delay::polling_sim::{replicate_polling, PollingSimConfig};
use wlan_delay::{mean_delay_zero_switchover, PUBLISHED_CAPACITY};

fn main() -> wlan_delay::Result<()> {
    let lambda = [10.0, 10.0, 10.0];
    let cfg = PollingSimConfig::zero_switchover(&lambda, PUBLISHED_CAPACITY, 5_000.0, 100.0)?;
    let sim = replicate_polling(&cfg, 30, 1)?;
    let analytic = mean_delay_zero_switchover(&lambda, PUBLISHED_CAPACITY)?;
    for (i, ci) in sim.sojourn.iter().enumerate() {
        println!(
            "queue {i}: {:.3} +/- {:.3} ms (analytic {:.3}) covered={}",
            ci.mean * 1e3,
            ci.halfwidth * 1e3,
            analytic * 1e3,
            ci.contains(analytic)
        );
    }
    println!("server busy fraction {:.4}", sim.busy_fraction.mean);
    Ok(())
}
