//! Mean packet delay in a single-cell IEEE 802.11 DCF WLAN, modelled as a
//! 1-limited random polling system whose server runs at the DCF saturation
//! throughput.
//!
//! The crate is organised bottom-up:
//!
//! - [`dcf`]: attempt-probability fixed point and saturation throughput `C(n)`.
//! - [`polling`]: mean-value formulas for random polling, including the
//!   zero-switchover closed form.
//! - [`sim`]: event calendar, random streams and replication statistics.
//! - [`polling_sim`]: simulator of the abstract polling system.
//! - [`dcf_sim`]: slot-level simulator of the DCF MAC with Poisson sources.
//! - [`experiment`]: table reproduction, sweeps, configuration and CSV output
//!   used by the `wlan-delay` binary.

pub mod config;
pub mod dcf;
pub mod dcf_sim;
pub mod error;
pub mod experiment;
pub mod polling;
pub mod polling_sim;
pub mod sim;

pub use dcf::{aggregate_throughput, solve_fixed_point, DcfParams, FixedPointSolution, SlotModel};
pub use error::{Error, Result};
pub use polling::{mean_delay_zero_switchover, wlan_config, DelayReport, PollingConfig};

/// Capacity used for the analytic columns of the published tables (pkts/s).
pub const PUBLISHED_CAPACITY: f64 = 72.5;
