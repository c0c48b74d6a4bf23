//! Solve the per-node collision probability for a few network sizes.
//!
//! `cargo run --example fixed_point`

use wlan_delay::dcf::{beta_from_backoff, beta_from_collision, DEFAULT_TOLERANCE};
use wlan_delay::{solve_fixed_point, DcfParams};

fn main() -> wlan_delay::Result<()> {
    let params = DcfParams::default();
    println!("{:>3} {:>10} {:>10} {:>6}", "n", "p", "beta", "iters");
    for n in [2, 3, 5, 10, 20, 50] {
        let fp = solve_fixed_point(n, &params, DEFAULT_TOLERANCE)?;
        println!(
            "{n:>3} {:>10.6} {:>10.6} {:>6}",
            fp.p, fp.beta, fp.iterations
        );
        // Both sides of the fixed point agree at the solution.
        let lhs = beta_from_backoff(fp.p, params.cw_min, params.max_stage)?;
        let rhs = beta_from_collision(fp.p, n)?;
        assert!((lhs - rhs).abs() < 1e-6);
    }
    Ok(())
}
