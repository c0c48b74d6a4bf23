//! The simulation building blocks: an event calendar, independent random
//! streams and replication statistics.
//!
//! `cargo run --example event_calendar`

use wlan_delay::sim::{replicate, EventCalendar, ReplicationStats, RngStream};

fn main() -> wlan_delay::Result<()> {
    let mut cal = EventCalendar::new();
    let mut rng = RngStream::new(7, 0);
    let mut t = 0.0;
    for k in 0..5 {
        t += rng.exponential(2.0)?;
        cal.push(t, format!("arrival {k}"));
    }
    cal.push(t, "tie, after the last arrival".to_string());
    while let Some((time, what)) = cal.pop() {
        println!("{time:8.4} {what}");
    }

    // Thirty replications of a mean of 1000 exponentials, one stream each.
    let means = replicate(
        |_, s| {
            let mut acc = ReplicationStats::new();
            for _ in 0..1000 {
                acc.push(s.exponential(4.0)?);
            }
            Ok(acc.mean)
        },
        30,
        1,
    )?;
    let ci = means.into_iter().collect::<ReplicationStats>().ci95()?;
    println!("mean {:.5} +/- {:.5} (true 0.25)", ci.mean, ci.halfwidth);
    Ok(())
}
