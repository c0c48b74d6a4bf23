//! Saturation model of the 802.11 DCF: attempt-probability fixed point,
//! virtual-slot outcome probabilities and durations, and the aggregate
//! throughput obtained from the renewal-reward argument over virtual slots.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bisection iteration cap for [`solve_fixed_point`].
pub const MAX_BISECTION_ITERATIONS: usize = 200;

/// Default tolerance on the conditional collision probability.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// PHY/MAC timing and backoff parameters (basic access).
///
/// Durations are in microseconds, sizes in bits and `data_rate` in bits per
/// second. Serialized field names match the configuration file keys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DcfParams {
    /// Initial contention window W, in slots.
    #[serde(rename = "cw_min_W")]
    pub cw_min: u32,
    /// Maximum number of window doublings m.
    #[serde(rename = "max_stage_m")]
    pub max_stage: u32,
    pub slot_time: f64,
    pub sifs: f64,
    pub difs: f64,
    /// Preamble plus PHY header, sent at a rate-independent duration.
    pub phy_header_time: f64,
    pub mac_header_bits: u64,
    pub payload_bits: u64,
    pub ack_bits: u64,
    pub data_rate: f64,
    pub propagation_delay: f64,
}

impl Default for DcfParams {
    /// 802.11b DSSS with long preamble, 1500 byte payloads at 1 Mbit/s.
    fn default() -> Self {
        DcfParams {
            cw_min: 32,
            max_stage: 5,
            slot_time: 20.0,
            sifs: 10.0,
            difs: 50.0,
            phy_header_time: 192.0,
            mac_header_bits: 272,
            payload_bits: 12_000,
            ack_bits: 112,
            data_rate: 1e6,
            propagation_delay: 0.0,
        }
    }
}

impl DcfParams {
    pub fn validate(&self) -> Result<()> {
        if self.cw_min < 2 {
            return Err(Error::config(format!(
                "cw_min_W must be >= 2, got {}",
                self.cw_min
            )));
        }
        // 2^m * W must fit comfortably in the backoff counter.
        if self.max_stage > 24 {
            return Err(Error::config(format!(
                "max_stage_m must be <= 24, got {}",
                self.max_stage
            )));
        }
        let durations = [
            ("slot_time", self.slot_time),
            ("sifs", self.sifs),
            ("difs", self.difs),
            ("phy_header_time", self.phy_header_time),
            ("propagation_delay", self.propagation_delay),
        ];
        for (name, value) in durations {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::config(format!(
                    "{name} must be a finite duration >= 0, got {value}"
                )));
            }
        }
        if !(self.data_rate.is_finite() && self.data_rate > 0.0) {
            return Err(Error::config(format!(
                "data_rate must be > 0, got {}",
                self.data_rate
            )));
        }
        if self.payload_bits == 0 {
            return Err(Error::config("payload_bits must be > 0"));
        }
        Ok(())
    }

    /// Contention window at backoff stage `stage` (capped at the maximum stage).
    pub fn window(&self, stage: u32) -> u64 {
        u64::from(self.cw_min) << stage.min(self.max_stage)
    }

    /// Airtime of `bits` at the data rate, in microseconds.
    fn airtime_us(&self, bits: u64) -> f64 {
        bits as f64 / self.data_rate * 1e6
    }
}

/// Solution of the attempt-probability fixed point for `n` contenders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointSolution {
    pub n: usize,
    /// Per-slot attempt probability.
    pub beta: f64,
    /// Conditional collision probability.
    pub p: f64,
    /// |beta_from_backoff(p) - beta_from_collision(p, n)| at the returned p.
    pub residual: f64,
    pub iterations: usize,
}

/// Virtual slot durations in microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlotDurations {
    pub idle: f64,
    pub success: f64,
    pub collision: f64,
}

/// Outcome probabilities of a generic virtual slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlotProbabilities {
    pub success: f64,
    pub idle: f64,
    pub collision: f64,
}

/// Outcome probabilities, durations and the resulting saturation
/// throughput for one contender count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlotModel {
    pub probabilities: SlotProbabilities,
    pub durations: SlotDurations,
    /// Aggregate successful packets per second.
    pub throughput_pps: f64,
}

impl SlotModel {
    /// Mean virtual slot length in seconds.
    pub fn mean_slot_seconds(&self) -> f64 {
        let (pr, d) = (&self.probabilities, &self.durations);
        (pr.idle * d.idle + pr.success * d.success + pr.collision * d.collision) * 1e-6
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// Attempt probability implied by the backoff process for conditional
/// collision probability `p`, initial window `w` and `m` doublings.
///
/// Evaluated as `2 / ((W+1) + pW * sum_{k<m} (2p)^k)`, which is the ratio
/// `2(1-2p) / ((W+1)(1-2p) + pW(1-(2p)^m))` with the common factor `1-2p`
/// cancelled. The cancelled form is continuous at p = 1/2.
pub fn beta_from_backoff(p: f64, w: u32, m: u32) -> Result<f64> {
    check_probability("p", p)?;
    if w < 2 {
        return Err(Error::domain(format!("W must be >= 2, got {w}")));
    }
    let w = f64::from(w);
    let two_p = 2.0 * p;
    let mut geometric = 0.0;
    let mut term = 1.0;
    for _ in 0..m {
        geometric += term;
        term *= two_p;
    }
    Ok(2.0 / ((w + 1.0) + p * w * geometric))
}

/// Attempt probability implied by `n - 1` independent competitors producing
/// conditional collision probability `p`.
pub fn beta_from_collision(p: f64, n: usize) -> Result<f64> {
    check_probability("p", p)?;
    if n < 2 {
        return Err(Error::domain(format!(
            "need at least 2 contenders, got {n}"
        )));
    }
    // 1 - (1-p)^(1/(n-1)) without cancellation for small p.
    Ok(-((-p).ln_1p() / (n - 1) as f64).exp_m1())
}

/// Finds the unique collision probability where the two attempt-probability
/// expressions agree, by bisection on `[0, 1]`.
///
/// The backoff expression decreases strictly and the collision expression
/// increases strictly, so their difference has exactly one sign change.
pub fn solve_fixed_point(n: usize, params: &DcfParams, tol: f64) -> Result<FixedPointSolution> {
    if n < 2 {
        return Err(Error::domain(format!(
            "need at least 2 contenders, got {n}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be > 0, got {tol}")));
    }
    params.validate()?;
    let (w, m) = (params.cw_min, params.max_stage);
    let f =
        |p: f64| -> Result<f64> { Ok(beta_from_backoff(p, w, m)? - beta_from_collision(p, n)?) };

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    debug_assert!(f(lo)? > 0.0 && f(hi)? < 0.0);
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations == MAX_BISECTION_ITERATIONS {
            let p = 0.5 * (lo + hi);
            return Err(Error::NonConvergence {
                iterations,
                residual: f(p)?.abs(),
            });
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Bracket is down to adjacent floats; tol is below machine resolution.
            return Err(Error::NonConvergence {
                iterations,
                residual: f(mid)?.abs(),
            });
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let p = 0.5 * (lo + hi);
    let beta = beta_from_backoff(p, w, m)?;
    Ok(FixedPointSolution {
        n,
        beta,
        p,
        residual: f(p)?.abs(),
        iterations,
    })
}

/// Idle, success and collision slot lengths for basic access.
///
/// A success carries the data frame, SIFS, the ACK and DIFS; a collision
/// carries the data frame followed by DIFS.
pub fn slot_durations(params: &DcfParams) -> SlotDurations {
    let data = params.phy_header_time
        + params.airtime_us(params.mac_header_bits + params.payload_bits)
        + params.propagation_delay;
    let ack =
        params.phy_header_time + params.airtime_us(params.ack_bits) + params.propagation_delay;
    SlotDurations {
        idle: params.slot_time,
        success: data + params.sifs + ack + params.difs,
        collision: data + params.difs,
    }
}

pub fn slot_probabilities(beta: f64, n: usize) -> Result<SlotProbabilities> {
    check_probability("beta", beta)?;
    if n < 1 {
        return Err(Error::domain("need at least one node"));
    }
    let quiet = 1.0 - beta;
    let success = n as f64 * beta * quiet.powi(n as i32 - 1);
    let idle = quiet.powi(n as i32);
    let collision = (1.0 - success - idle).max(0.0);
    Ok(SlotProbabilities {
        success,
        idle,
        collision,
    })
}

/// Full slot model for `n` saturated contenders.
pub fn slot_model(n: usize, params: &DcfParams) -> Result<SlotModel> {
    let fp = solve_fixed_point(n, params, DEFAULT_TOLERANCE)?;
    let probabilities = slot_probabilities(fp.beta, n)?;
    let durations = slot_durations(params);
    let mean_us = probabilities.idle * durations.idle
        + probabilities.success * durations.success
        + probabilities.collision * durations.collision;
    let throughput_pps = if probabilities.success > 0.0 {
        probabilities.success / (mean_us * 1e-6)
    } else {
        0.0
    };
    Ok(SlotModel {
        probabilities,
        durations,
        throughput_pps,
    })
}

/// Saturation throughput C(n) in packets per second.
pub fn aggregate_throughput(n: usize, params: &DcfParams) -> Result<f64> {
    Ok(slot_model(n, params)?.throughput_pps)
}

/// `(n, C(n))` rows for every `n` in `n_min..=n_max`.
pub fn throughput_curve(
    n_min: usize,
    n_max: usize,
    params: &DcfParams,
) -> Result<Vec<(usize, f64)>> {
    if n_min < 2 || n_min > n_max {
        return Err(Error::domain(format!(
            "need 2 <= n_min <= n_max, got {n_min}..={n_max}"
        )));
    }
    (n_min..=n_max)
        .map(|n| Ok((n, aggregate_throughput(n, params)?)))
        .collect()
}
