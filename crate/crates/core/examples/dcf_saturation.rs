//! Saturated slot-level DCF simulation checked against the fixed point.
//!
//! `cargo run --release --example dcf_saturation`

use wlan_delay::dcf::DEFAULT_TOLERANCE;
use wlan_delay::dcf_sim::{replicate_dcf, DcfSimConfig, RunSettings};
use wlan_delay::{aggregate_throughput, solve_fixed_point, DcfParams};

fn main() -> wlan_delay::Result<()> {
    let params = DcfParams::default();
    let settings = RunSettings {
        reps: 30,
        seed: 1,
        horizon: 200.0,
        warmup: 10.0,
    };
    for n in [3, 5, 10] {
        let cfg = DcfSimConfig::saturated(n, params, settings.horizon, settings.warmup)?;
        let sim = replicate_dcf(&cfg, settings)?;
        let fp = solve_fixed_point(n, &params, DEFAULT_TOLERANCE)?;
        println!(
            "n={n:>2}: p_hat {:.4} +/- {:.4} (model {:.4})  S {:.2} pkt/s (model {:.2})",
            sim.p_hat.mean,
            sim.p_hat.halfwidth,
            fp.p,
            sim.aggregate_throughput.mean,
            aggregate_throughput(n, &params)?
        );
    }
    Ok(())
}
