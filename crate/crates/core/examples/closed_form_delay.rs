//! Closed-form mean delay with zero switchover.
//!
//! The delay depends only on the aggregate arrival rate, so every split of
//! 30 pkt/s over three nodes gives the same answer.
//!
//! `cargo run --example closed_form_delay`

use wlan_delay::{aggregate_throughput, mean_delay_zero_switchover, DcfParams, PUBLISHED_CAPACITY};

fn main() -> wlan_delay::Result<()> {
    let computed = aggregate_throughput(3, &DcfParams::default())?;
    for lambda in [
        [10.0, 10.0, 10.0],
        [5.0, 10.0, 15.0],
        [1.0, 1.0, 28.0],
        [20.0, 20.0, 20.0],
    ] {
        let published = mean_delay_zero_switchover(&lambda, PUBLISHED_CAPACITY)?;
        let own = mean_delay_zero_switchover(&lambda, computed)?;
        println!(
            "{lambda:?}: {:.3} ms at C={PUBLISHED_CAPACITY}, {:.3} ms at C={computed:.2}",
            published * 1e3,
            own * 1e3
        );
    }
    match mean_delay_zero_switchover(&[40.0, 40.0], PUBLISHED_CAPACITY) {
        Err(e) => println!("80 pkt/s: {e}"),
        Ok(d) => println!("80 pkt/s: {d}"),
    }
    Ok(())
}
