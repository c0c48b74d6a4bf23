//! Random polling with nonzero switchover: per-queue mean queue length,
//! probability of a nonempty poll, and mean delay.
//!
//! `cargo run --example lee_polling`

use wlan_delay::polling::{delay_report, PollingConfig};

fn main() -> wlan_delay::Result<()> {
    // Two queues, deterministic 10 ms service, 2 ms deterministic switchover.
    let cfg = PollingConfig::new(
        vec![20.0, 10.0],
        vec![0.5, 0.5],
        vec![0.01, 0.01],
        vec![1e-4, 1e-4],
        vec![2e-3, 2e-3],
        vec![4e-6, 4e-6],
    )?;
    let r = delay_report(&cfg)?;
    println!("total utilization {:.3}", r.rho);
    for i in 0..cfg.n {
        println!(
            "queue {i}: rho={:.3} E[Q]={:.5} P(nonempty)={:.5} E[W]={:.3} ms",
            r.rho_i[i],
            r.e_q[i],
            r.p_nonempty[i],
            r.e_w[i] * 1e3
        );
    }
    Ok(())
}
