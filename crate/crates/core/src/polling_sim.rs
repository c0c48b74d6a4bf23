//! Event-driven simulation of the single-server, 1-limited random polling
//! system.
//!
//! Two disciplines are supported. In [`PollingMode::Lee`] the server draws the
//! next queue from the selection probabilities regardless of its content and
//! pays a switchover after every visit. In [`PollingMode::ZeroSwitchover`] it
//! picks uniformly among the non-empty queues and idles only when the whole
//! system is empty.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polling::{utilization, PollingConfig};
use crate::sim::{replicate, ConfidenceInterval, EventCalendar, ReplicationStats, RngStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PollingMode {
    Lee,
    ZeroSwitchover,
}

/// Shape of a service or switchover distribution with a given mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeDist {
    Deterministic,
    Exponential,
}

impl TimeDist {
    fn sample(self, mean: f64, stream: &mut RngStream) -> Result<f64> {
        match self {
            TimeDist::Deterministic => Ok(mean),
            TimeDist::Exponential if mean == 0.0 => Ok(0.0),
            TimeDist::Exponential => stream.exponential(1.0 / mean),
        }
    }

    /// Second moment implied by the shape.
    pub fn second_moment(self, mean: f64) -> f64 {
        match self {
            TimeDist::Deterministic => mean * mean,
            TimeDist::Exponential => 2.0 * mean * mean,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PollingSimConfig {
    pub base: PollingConfig,
    pub mode: PollingMode,
    pub service_dist: TimeDist,
    pub switch_dist: TimeDist,
    /// Simulated time at which the run stops (s).
    pub horizon: f64,
    /// Statistics are collected only after this time (s).
    pub warmup: f64,
}

impl PollingSimConfig {
    /// Zero-switchover configuration with deterministic service `1/C`.
    pub fn zero_switchover(
        lambda: &[f64],
        capacity: f64,
        horizon: f64,
        warmup: f64,
    ) -> Result<Self> {
        let base = crate::polling::wlan_config(lambda, capacity, 0.0)?;
        let cfg = PollingSimConfig {
            base,
            mode: PollingMode::ZeroSwitchover,
            service_dist: TimeDist::Deterministic,
            switch_dist: TimeDist::Deterministic,
            horizon,
            warmup,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.warmup >= 0.0 && self.horizon > self.warmup && self.horizon.is_finite()) {
            return Err(Error::config(format!(
                "need horizon > warmup >= 0, got horizon {} warmup {}",
                self.horizon, self.warmup
            )));
        }
        let consistent = |dist: TimeDist, m: f64, m2: f64| {
            (dist.second_moment(m) - m2).abs() <= 1e-9 * m2.max(1e-300)
        };
        for i in 0..self.base.n {
            if !consistent(
                self.service_dist,
                self.base.service_mean[i],
                self.base.service_m2[i],
            ) {
                return Err(Error::config(format!(
                    "queue {i}: service moments do not match {:?}",
                    self.service_dist
                )));
            }
            if !consistent(
                self.switch_dist,
                self.base.switch_mean[i],
                self.base.switch_m2[i],
            ) {
                return Err(Error::config(format!(
                    "queue {i}: switchover moments do not match {:?}",
                    self.switch_dist
                )));
            }
        }
        match self.mode {
            PollingMode::ZeroSwitchover if self.base.switch_mean.iter().any(|&s| s != 0.0) => Err(
                Error::config("zero-switchover mode requires every switchover mean to be 0"),
            ),
            PollingMode::Lee if self.base.mean_switchover() <= 0.0 => Err(Error::config(
                "Lee mode requires a positive mean switchover",
            )),
            _ => Ok(()),
        }
    }
}

/// Outcome of one simulation run, measured over `[warmup, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PollingSimReport {
    /// Mean sojourn time of packets departing in the window (s).
    pub mean_sojourn: Vec<f64>,
    /// Time-average number of packets at each queue, including the one in service.
    pub mean_qlen: Vec<f64>,
    /// Fraction of decisions at which the queue held at least one packet:
    /// polls of that queue in Lee mode, every service decision in
    /// zero-switchover mode.
    pub p_nonempty: Vec<f64>,
    /// Mean number of packets found at polls of the queue (Lee mode).
    pub qlen_at_poll: Vec<f64>,
    pub served: Vec<u64>,
    /// Per-queue departures per second.
    pub served_rate: Vec<f64>,
    pub aggregate_rate: f64,
    /// Fraction of the window the server spent serving.
    pub busy_fraction: f64,
}

#[derive(Debug, Clone, Copy)]
enum ServerEvent {
    Poll,
    Departure(usize),
}

struct Observer {
    warmup: f64,
    horizon: f64,
    last: f64,
    area: Vec<f64>,
    busy: f64,
    sojourn: Vec<ReplicationStats>,
    polls: Vec<u64>,
    polls_nonempty: Vec<u64>,
    found: Vec<u64>,
}

impl Observer {
    fn new(n: usize, warmup: f64, horizon: f64) -> Self {
        Observer {
            warmup,
            horizon,
            last: 0.0,
            area: vec![0.0; n],
            busy: 0.0,
            sojourn: vec![ReplicationStats::new(); n],
            polls: vec![0; n],
            polls_nonempty: vec![0; n],
            found: vec![0; n],
        }
    }

    /// Accumulates time-weighted state up to `now`.
    fn advance(&mut self, now: f64, queues: &[VecDeque<f64>], busy: bool) {
        let from = self.last.max(self.warmup);
        let to = now.min(self.horizon);
        if to > from {
            let dt = to - from;
            for (a, q) in self.area.iter_mut().zip(queues) {
                *a += dt * q.len() as f64;
            }
            if busy {
                self.busy += dt;
            }
        }
        self.last = now;
    }

    fn in_window(&self, t: f64) -> bool {
        t >= self.warmup && t <= self.horizon
    }

    fn poll(&mut self, t: f64, i: usize, len: usize) {
        if self.in_window(t) {
            self.polls[i] += 1;
            self.found[i] += len as u64;
            if len > 0 {
                self.polls_nonempty[i] += 1;
            }
        }
    }

    fn report(self, lambda_len: usize) -> PollingSimReport {
        let window = self.horizon - self.warmup;
        let ratio = |a: u64, b: u64| {
            if b == 0 {
                f64::NAN
            } else {
                a as f64 / b as f64
            }
        };
        let served: Vec<u64> = self.sojourn.iter().map(|s| s.count).collect();
        let served_rate: Vec<f64> = served.iter().map(|&c| c as f64 / window).collect();
        PollingSimReport {
            mean_sojourn: self
                .sojourn
                .iter()
                .map(|s| if s.count == 0 { f64::NAN } else { s.mean })
                .collect(),
            mean_qlen: self.area.iter().map(|a| a / window).collect(),
            p_nonempty: (0..lambda_len)
                .map(|i| ratio(self.polls_nonempty[i], self.polls[i]))
                .collect(),
            qlen_at_poll: (0..lambda_len)
                .map(|i| ratio(self.found[i], self.polls[i]))
                .collect(),
            aggregate_rate: served_rate.iter().sum(),
            served,
            served_rate,
            busy_fraction: self.busy / window,
        }
    }
}

/// Simulates one run of the polling system.
pub fn simulate_polling(
    cfg: &PollingSimConfig,
    stream: &mut RngStream,
) -> Result<PollingSimReport> {
    cfg.validate()?;
    let base = &cfg.base;
    let n = base.n;
    let mut queues: Vec<VecDeque<f64>> = vec![VecDeque::new(); n];
    let mut arrivals = EventCalendar::new();
    for (i, &l) in base.lambda.iter().enumerate() {
        arrivals.push(stream.exponential(l)?, i);
    }
    let mut obs = Observer::new(n, cfg.warmup, cfg.horizon);

    // Next server event; `None` while idle in zero-switchover mode.
    let mut server: Option<(f64, ServerEvent)> = match cfg.mode {
        PollingMode::Lee => Some((0.0, ServerEvent::Poll)),
        PollingMode::ZeroSwitchover => None,
    };
    let mut busy = false;
    let mut nonempty: Vec<usize> = Vec::with_capacity(n);

    loop {
        let next_arrival = arrivals.peek_time().unwrap_or(f64::INFINITY);
        // Server events win ties with arrivals.
        let server_first = matches!(server, Some((t, _)) if t <= next_arrival);
        let now = if server_first {
            server.map(|(t, _)| t).unwrap_or(f64::INFINITY)
        } else {
            next_arrival
        };
        if now > cfg.horizon {
            obs.advance(cfg.horizon, &queues, busy);
            break;
        }
        obs.advance(now, &queues, busy);

        if !server_first {
            let (t, i) = arrivals.pop().expect("arrival calendar is never empty");
            queues[i].push_back(t);
            arrivals.push(t + stream.exponential(base.lambda[i])?, i);
            if cfg.mode == PollingMode::ZeroSwitchover && server.is_none() {
                // Idle server takes the only waiting packet at once.
                for (k, q) in queues.iter().enumerate() {
                    obs.poll(t, k, q.len());
                }
                let service = cfg.service_dist.sample(base.service_mean[i], stream)?;
                server = Some((t + service, ServerEvent::Departure(i)));
                busy = true;
            }
            continue;
        }

        let (t, event) = server.take().expect("server event present");
        match (cfg.mode, event) {
            (PollingMode::Lee, ServerEvent::Poll) => {
                let j = stream.weighted_index(&base.gamma);
                obs.poll(t, j, queues[j].len());
                if queues[j].is_empty() {
                    let switch = cfg.switch_dist.sample(base.switch_mean[j], stream)?;
                    server = Some((t + switch, ServerEvent::Poll));
                } else {
                    let service = cfg.service_dist.sample(base.service_mean[j], stream)?;
                    server = Some((t + service, ServerEvent::Departure(j)));
                    busy = true;
                }
            }
            (PollingMode::Lee, ServerEvent::Departure(j)) => {
                depart(&mut queues[j], &mut obs.sojourn[j], t, cfg.warmup);
                busy = false;
                let switch = cfg.switch_dist.sample(base.switch_mean[j], stream)?;
                server = Some((t + switch, ServerEvent::Poll));
            }
            (PollingMode::ZeroSwitchover, ServerEvent::Departure(j)) => {
                depart(&mut queues[j], &mut obs.sojourn[j], t, cfg.warmup);
                nonempty.clear();
                nonempty.extend(
                    queues
                        .iter()
                        .enumerate()
                        .filter(|(_, q)| !q.is_empty())
                        .map(|(k, _)| k),
                );
                if nonempty.is_empty() {
                    busy = false;
                } else {
                    for (k, q) in queues.iter().enumerate() {
                        obs.poll(t, k, q.len());
                    }
                    let pick = nonempty[stream.below(nonempty.len() as u64) as usize];
                    let service = cfg.service_dist.sample(base.service_mean[pick], stream)?;
                    server = Some((t + service, ServerEvent::Departure(pick)));
                }
            }
            (PollingMode::ZeroSwitchover, ServerEvent::Poll) => {
                unreachable!("zero-switchover mode never polls")
            }
        }
    }
    Ok(obs.report(n))
}

fn depart(queue: &mut VecDeque<f64>, stats: &mut ReplicationStats, t: f64, warmup: f64) {
    let arrived = queue.pop_front().expect("departure from an empty queue");
    if t >= warmup {
        stats.push(t - arrived);
    }
}

/// Per-queue replication summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PollingSimSummary {
    pub seed: u64,
    pub reps: u64,
    pub lambda: Vec<f64>,
    pub sojourn: Vec<ConfidenceInterval>,
    pub qlen: Vec<ConfidenceInterval>,
    pub p_nonempty: Vec<ConfidenceInterval>,
    pub qlen_at_poll: Vec<ConfidenceInterval>,
    pub served_rate: Vec<ConfidenceInterval>,
    pub busy_fraction: ConfidenceInterval,
    pub runs: Vec<PollingSimReport>,
}

/// Runs `reps` independent replications (`reps >= 2`).
pub fn replicate_polling(
    cfg: &PollingSimConfig,
    reps: u64,
    seed: u64,
) -> Result<PollingSimSummary> {
    cfg.validate()?;
    let (_, rho) = utilization(&cfg.base);
    if rho >= 1.0 {
        return Err(Error::Unstable { rho });
    }
    let runs = replicate(|_, stream| simulate_polling(cfg, stream), reps, seed)?;
    let n = cfg.base.n;
    let per_queue =
        |f: &dyn Fn(&PollingSimReport) -> &Vec<f64>| -> Result<Vec<ConfidenceInterval>> {
            (0..n)
                .map(|i| {
                    runs.iter()
                        .map(|r| f(r)[i])
                        .filter(|x| x.is_finite())
                        .collect::<ReplicationStats>()
                        .ci95()
                })
                .collect()
        };
    Ok(PollingSimSummary {
        seed,
        reps,
        lambda: cfg.base.lambda.clone(),
        sojourn: per_queue(&|r| &r.mean_sojourn)?,
        qlen: per_queue(&|r| &r.mean_qlen)?,
        p_nonempty: per_queue(&|r| &r.p_nonempty)?,
        qlen_at_poll: per_queue(&|r| &r.qlen_at_poll)?,
        served_rate: per_queue(&|r| &r.served_rate)?,
        busy_fraction: runs
            .iter()
            .map(|r| r.busy_fraction)
            .collect::<ReplicationStats>()
            .ci95()?,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polling::wlan_config;

    #[test]
    fn rejects_inconsistent_configs() {
        let mut cfg = PollingSimConfig::zero_switchover(&[10.0, 10.0], 72.5, 100.0, 10.0).unwrap();
        cfg.warmup = 200.0;
        assert!(cfg.validate().is_err());

        let lee = PollingSimConfig {
            base: wlan_config(&[10.0, 10.0], 72.5, 1e-3).unwrap(),
            mode: PollingMode::ZeroSwitchover,
            service_dist: TimeDist::Deterministic,
            switch_dist: TimeDist::Deterministic,
            horizon: 100.0,
            warmup: 0.0,
        };
        assert!(lee.validate().is_err());
        let lee = PollingSimConfig {
            mode: PollingMode::Lee,
            ..lee
        };
        assert!(lee.validate().is_ok());
        let wrong_dist = PollingSimConfig {
            service_dist: TimeDist::Exponential,
            ..lee.clone()
        };
        assert!(wrong_dist.validate().is_err());
        let no_switch = PollingSimConfig {
            mode: PollingMode::Lee,
            ..PollingSimConfig::zero_switchover(&[1.0], 10.0, 10.0, 0.0).unwrap()
        };
        assert!(no_switch.validate().is_err());
    }

    #[test]
    fn single_run_is_deterministic_and_balanced() {
        let cfg = PollingSimConfig::zero_switchover(&[10.0, 20.0], 72.5, 2_000.0, 100.0).unwrap();
        let a = simulate_polling(&cfg, &mut RngStream::new(3, 0)).unwrap();
        let b = simulate_polling(&cfg, &mut RngStream::new(3, 0)).unwrap();
        assert_eq!(a, b);
        for (rate, l) in a.served_rate.iter().zip([10.0, 20.0]) {
            assert!((rate - l).abs() / l < 0.05, "served {rate} vs offered {l}");
        }
        assert!(a.aggregate_rate <= 30.0 * 1.05);
        assert!((a.busy_fraction - 30.0 / 72.5).abs() < 0.02);
        for s in &a.mean_sojourn {
            assert!(*s >= 1.0 / 72.5 - 1e-12);
        }
    }

    #[test]
    fn lee_mode_runs() {
        let cfg = PollingSimConfig {
            base: wlan_config(&[10.0, 10.0], 72.5, 1e-3).unwrap(),
            mode: PollingMode::Lee,
            service_dist: TimeDist::Deterministic,
            switch_dist: TimeDist::Deterministic,
            horizon: 500.0,
            warmup: 10.0,
        };
        let r = simulate_polling(&cfg, &mut RngStream::new(1, 0)).unwrap();
        assert!(r.p_nonempty.iter().all(|p| (0.0..=1.0).contains(p)));
        assert!(r.served.iter().all(|&c| c > 4_000));
    }
}
