//! Shrinking the switchover time drives the random-polling delay to the
//! zero-switchover closed form.
//!
//! `cargo run --example limit_chain`

use wlan_delay::polling::{mean_delay, wlan_config};
use wlan_delay::{mean_delay_zero_switchover, PUBLISHED_CAPACITY};

fn main() -> wlan_delay::Result<()> {
    let lambda = [5.0, 10.0, 15.0];
    let target = mean_delay_zero_switchover(&lambda, PUBLISHED_CAPACITY)?;
    println!("zero switchover: {:.6} ms", target * 1e3);
    let mut eps = 1e-2;
    while eps >= 1e-7 {
        let cfg = wlan_config(&lambda, PUBLISHED_CAPACITY, eps)?;
        let w = mean_delay(&cfg, 0)?;
        println!(
            "eps={eps:.0e}: {:.6} ms  rel err {:.2e}",
            w * 1e3,
            (w - target).abs() / target
        );
        eps /= 10.0;
    }
    Ok(())
}
