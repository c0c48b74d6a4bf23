//! Slot-level simulation of single-cell 802.11 DCF (basic access).
//!
//! Time advances in virtual slots. At each slot boundary every contending
//! node whose backoff counter is zero transmits; the slot is idle, a success
//! or a collision depending on how many transmit, and lasts `T_I`, `T_S` or
//! `T_C` accordingly. Every contending node that did not transmit decrements
//! its counter by one per virtual slot. Poisson arrivals happen in continuous
//! time and take effect at the next slot boundary.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dcf::{aggregate_throughput, slot_durations, DcfParams};
use crate::error::{Error, Result};
use crate::polling::mean_delay_zero_switchover;
use crate::sim::{replicate, ConfidenceInterval, ReplicationStats, RngStream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Traffic {
    /// Every node always has a packet to send.
    Saturated,
    /// Independent Poisson arrivals, one rate per node (packets/s).
    Poisson(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcfSimConfig {
    pub n: usize,
    pub params: DcfParams,
    pub traffic: Traffic,
    /// Simulated seconds per run.
    pub horizon: f64,
    /// Seconds discarded before statistics start.
    pub warmup: f64,
}

impl DcfSimConfig {
    pub fn poisson(lambda: &[f64], params: DcfParams, horizon: f64, warmup: f64) -> Result<Self> {
        let cfg = DcfSimConfig {
            n: lambda.len(),
            params,
            traffic: Traffic::Poisson(lambda.to_vec()),
            horizon,
            warmup,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn saturated(n: usize, params: DcfParams, horizon: f64, warmup: f64) -> Result<Self> {
        let cfg = DcfSimConfig {
            n,
            params,
            traffic: Traffic::Saturated,
            horizon,
            warmup,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n < 2 {
            return Err(Error::config(format!(
                "need at least 2 nodes, got {}",
                self.n
            )));
        }
        if let Traffic::Poisson(lambda) = &self.traffic {
            if lambda.len() != self.n {
                return Err(Error::config(format!(
                    "{} arrival rates for {} nodes",
                    lambda.len(),
                    self.n
                )));
            }
            if let Some(l) = lambda.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
                return Err(Error::config(format!(
                    "arrival rates must be > 0, found {l}"
                )));
            }
        }
        if !(self.warmup >= 0.0 && self.horizon > self.warmup && self.horizon.is_finite()) {
            return Err(Error::config(format!(
                "need horizon > warmup >= 0, got horizon {} warmup {}",
                self.horizon, self.warmup
            )));
        }
        Ok(())
    }
}

/// Per-node MAC state.
#[derive(Debug, Clone, Default)]
pub struct NodeState {
    /// Arrival times of queued packets, head of line first.
    pub queue: VecDeque<f64>,
    pub backoff_stage: u32,
    pub backoff_counter: u64,
    pub contending: bool,
}

impl NodeState {
    fn draw_backoff(&mut self, params: &DcfParams, stream: &mut RngStream) {
        self.backoff_counter = stream.below(params.window(self.backoff_stage));
    }

    fn start_contending(&mut self, params: &DcfParams, stream: &mut RngStream) {
        self.contending = true;
        self.backoff_stage = 0;
        self.draw_backoff(params, stream);
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SlotCounts {
    pub idle: u64,
    pub success: u64,
    pub collision: u64,
}

impl SlotCounts {
    pub fn total(&self) -> u64 {
        self.idle + self.success + self.collision
    }
}

/// Measurements from one run over `[warmup, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DcfSimReport {
    /// Mean sojourn per node (s); NaN under saturation.
    pub mean_delay: Vec<f64>,
    /// Mean sojourn over every packet delivered in the window (s).
    pub overall_delay: f64,
    pub throughput: Vec<f64>,
    pub aggregate_throughput: f64,
    /// Attempts per contending node-slot.
    pub beta_hat: f64,
    /// Fraction of attempts that collided.
    pub p_hat: f64,
    /// Slots that started inside the window.
    pub window_slots: SlotCounts,
    /// Every slot of the run.
    pub all_slots: SlotCounts,
    /// Simulated time at the end of the run (s).
    pub elapsed: f64,
}

/// Simulates one run.
pub fn simulate_dcf(cfg: &DcfSimConfig, stream: &mut RngStream) -> Result<DcfSimReport> {
    cfg.validate()?;
    let params = &cfg.params;
    let n = cfg.n;
    let durations = slot_durations(params);
    let (t_idle, t_success, t_collision) = (
        durations.idle * 1e-6,
        durations.success * 1e-6,
        durations.collision * 1e-6,
    );
    let saturated = matches!(cfg.traffic, Traffic::Saturated);
    let lambda: Vec<f64> = match &cfg.traffic {
        Traffic::Poisson(l) => l.clone(),
        Traffic::Saturated => Vec::new(),
    };

    let mut nodes = vec![NodeState::default(); n];
    let mut next_arrival = vec![f64::INFINITY; n];
    if saturated {
        for node in &mut nodes {
            node.queue.push_back(0.0);
            node.start_contending(params, stream);
        }
    } else {
        for (i, &l) in lambda.iter().enumerate() {
            next_arrival[i] = stream.exponential(l)?;
        }
    }

    let mut delay = vec![ReplicationStats::new(); n];
    let mut delivered = vec![0u64; n];
    let mut window_slots = SlotCounts::default();
    let mut all_slots = SlotCounts::default();
    let (mut attempts, mut collided, mut node_slots) = (0u64, 0u64, 0u64);
    let mut transmitters: Vec<usize> = Vec::with_capacity(n);
    let mut t = 0.0_f64;

    while t < cfg.horizon {
        if !saturated {
            for (i, node) in nodes.iter_mut().enumerate() {
                while next_arrival[i] <= t {
                    node.queue.push_back(next_arrival[i]);
                    next_arrival[i] += stream.exponential(lambda[i])?;
                }
                if !node.contending && !node.queue.is_empty() {
                    node.start_contending(params, stream);
                }
            }
            if !nodes.iter().any(|node| node.contending) {
                // Empty medium: skip idle slots until the next arrival is due.
                let due = next_arrival.iter().copied().fold(f64::INFINITY, f64::min);
                let slots = if t_idle > 0.0 {
                    ((due - t) / t_idle).ceil().max(1.0)
                } else {
                    0.0
                };
                let skipped = slots as u64;
                let until = if t_idle > 0.0 {
                    t + slots * t_idle
                } else {
                    due
                };
                all_slots.idle += skipped;
                if t >= cfg.warmup {
                    window_slots.idle += skipped;
                } else if until > cfg.warmup {
                    let before = ((cfg.warmup - t) / t_idle).ceil() as u64;
                    window_slots.idle += skipped.saturating_sub(before);
                }
                t = until;
                continue;
            }
        }

        transmitters.clear();
        let mut contenders = 0u64;
        for (i, node) in nodes.iter().enumerate() {
            if node.contending {
                contenders += 1;
                if node.backoff_counter == 0 {
                    transmitters.push(i);
                }
            }
        }
        let in_window = t >= cfg.warmup;
        if in_window {
            node_slots += contenders;
            attempts += transmitters.len() as u64;
            if transmitters.len() > 1 {
                collided += transmitters.len() as u64;
            }
        }

        let slot = match transmitters.len() {
            0 => {
                all_slots.idle += 1;
                window_slots.idle += u64::from(in_window);
                t_idle
            }
            1 => {
                all_slots.success += 1;
                window_slots.success += u64::from(in_window);
                t_success
            }
            _ => {
                all_slots.collision += 1;
                window_slots.collision += u64::from(in_window);
                t_collision
            }
        };
        let end = t + slot;

        for node in nodes
            .iter_mut()
            .filter(|node| node.contending && node.backoff_counter > 0)
        {
            node.backoff_counter -= 1;
        }
        if let [winner] = transmitters[..] {
            let node = &mut nodes[winner];
            let arrived = node
                .queue
                .pop_front()
                .expect("transmitting node has a packet");
            if end >= cfg.warmup && end <= cfg.horizon {
                delivered[winner] += 1;
                if !saturated {
                    delay[winner].push(end - arrived);
                }
            }
            if saturated {
                node.queue.push_back(end);
            }
            if node.queue.is_empty() {
                node.contending = false;
            } else {
                node.backoff_stage = 0;
                node.draw_backoff(params, stream);
            }
        } else {
            for &i in &transmitters {
                let node = &mut nodes[i];
                node.backoff_stage = (node.backoff_stage + 1).min(params.max_stage);
                node.draw_backoff(params, stream);
            }
        }
        t = end;
    }

    let window = cfg.horizon - cfg.warmup;
    let throughput: Vec<f64> = delivered.iter().map(|&d| d as f64 / window).collect();
    let total_delivered: u64 = delay.iter().map(|s| s.count).sum();
    let overall_delay = if saturated || total_delivered == 0 {
        f64::NAN
    } else {
        delay.iter().map(|s| s.mean * s.count as f64).sum::<f64>() / total_delivered as f64
    };
    let ratio = |a: u64, b: u64| {
        if b == 0 {
            f64::NAN
        } else {
            a as f64 / b as f64
        }
    };
    Ok(DcfSimReport {
        mean_delay: delay
            .iter()
            .map(|s| if s.count == 0 { f64::NAN } else { s.mean })
            .collect(),
        overall_delay,
        aggregate_throughput: throughput.iter().sum(),
        throughput,
        beta_hat: ratio(attempts, node_slots),
        p_hat: ratio(collided, attempts),
        window_slots,
        all_slots,
        elapsed: t,
    })
}

/// Replication settings shared by the DCF experiments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub reps: u64,
    pub seed: u64,
    pub horizon: f64,
    pub warmup: f64,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            reps: 30,
            seed: 1,
            horizon: 2_000.0,
            warmup: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DcfSimSummary {
    pub settings: RunSettings,
    pub delay: Vec<ConfidenceInterval>,
    pub overall_delay: Option<ConfidenceInterval>,
    pub throughput: Vec<ConfidenceInterval>,
    pub aggregate_throughput: ConfidenceInterval,
    pub beta_hat: ConfidenceInterval,
    pub p_hat: ConfidenceInterval,
    pub runs: Vec<DcfSimReport>,
}

fn interval(values: impl Iterator<Item = f64>) -> Result<ConfidenceInterval> {
    values
        .filter(|x| x.is_finite())
        .collect::<ReplicationStats>()
        .ci95()
}

/// Replicates [`simulate_dcf`] and summarizes with 95% intervals (`reps >= 2`).
pub fn replicate_dcf(cfg: &DcfSimConfig, settings: RunSettings) -> Result<DcfSimSummary> {
    let cfg = DcfSimConfig {
        horizon: settings.horizon,
        warmup: settings.warmup,
        ..cfg.clone()
    };
    cfg.validate()?;
    let runs = replicate(
        |_, stream| simulate_dcf(&cfg, stream),
        settings.reps,
        settings.seed,
    )?;
    let saturated = matches!(cfg.traffic, Traffic::Saturated);
    let per_node = |f: fn(&DcfSimReport) -> &Vec<f64>| -> Result<Vec<ConfidenceInterval>> {
        (0..cfg.n)
            .map(|i| interval(runs.iter().map(|r| f(r)[i])))
            .collect()
    };
    Ok(DcfSimSummary {
        settings,
        delay: if saturated {
            Vec::new()
        } else {
            per_node(|r| &r.mean_delay)?
        },
        overall_delay: if saturated {
            None
        } else {
            Some(interval(runs.iter().map(|r| r.overall_delay))?)
        },
        throughput: per_node(|r| &r.throughput)?,
        aggregate_throughput: interval(runs.iter().map(|r| r.aggregate_throughput))?,
        beta_hat: interval(runs.iter().map(|r| r.beta_hat))?,
        p_hat: interval(runs.iter().map(|r| r.p_hat))?,
        runs,
    })
}

/// One point of a delay sweep. `simulated` is `None` for points at or over
/// capacity, which are flagged rather than simulated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub lambda: f64,
    /// Saturation throughput used for the analytic column (pkts/s).
    pub capacity: f64,
    pub stable: bool,
    pub simulated: Option<ConfidenceInterval>,
    /// Closed-form mean delay (s); `None` when unstable.
    pub analytic: Option<f64>,
}

fn sweep_point(
    n: usize,
    lambda: f64,
    params: &DcfParams,
    settings: RunSettings,
) -> Result<SweepRow> {
    let capacity = aggregate_throughput(n, params)?;
    let rates = vec![lambda; n];
    let analytic = match mean_delay_zero_switchover(&rates, capacity) {
        Ok(d) => Some(d),
        Err(Error::Unstable { .. }) => None,
        Err(e) => return Err(e),
    };
    let simulated = match analytic {
        Some(_) => {
            let cfg = DcfSimConfig::poisson(&rates, *params, settings.horizon, settings.warmup)?;
            replicate_dcf(&cfg, settings)?.overall_delay
        }
        None => None,
    };
    Ok(SweepRow {
        n,
        lambda,
        capacity,
        stable: analytic.is_some(),
        simulated,
        analytic,
    })
}

/// Mean delay against per-node arrival rate for `n` symmetric nodes.
pub fn delay_vs_load_sweep(
    n: usize,
    lambda_grid: &[f64],
    params: &DcfParams,
    settings: RunSettings,
) -> Result<Vec<SweepRow>> {
    lambda_grid
        .iter()
        .map(|&l| sweep_point(n, l, params, settings))
        .collect()
}

/// Mean delay against node count at a fixed per-node arrival rate.
pub fn delay_vs_n_sweep(
    lambda: f64,
    n_grid: &[usize],
    params: &DcfParams,
    settings: RunSettings,
) -> Result<Vec<SweepRow>> {
    n_grid
        .iter()
        .map(|&n| sweep_point(n, lambda, params, settings))
        .collect()
}
