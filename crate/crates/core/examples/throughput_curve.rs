//! Saturation throughput C(n) in packets per second, with the slot breakdown.
//!
//! `cargo run --example throughput_curve`

use wlan_delay::dcf::{slot_durations, slot_model, throughput_curve};
use wlan_delay::DcfParams;

fn main() -> wlan_delay::Result<()> {
    let params = DcfParams::default();
    let d = slot_durations(&params);
    println!(
        "slot lengths (us): idle {} success {} collision {}",
        d.idle, d.success, d.collision
    );

    for (n, c) in throughput_curve(2, 30, &params)? {
        let m = slot_model(n, &params)?;
        let p = m.probabilities;
        println!(
            "n={n:>2}  C={c:7.3} pkt/s  P(success)={:.4} P(idle)={:.4} P(collision)={:.4}",
            p.success, p.idle, p.collision
        );
    }
    Ok(())
}
