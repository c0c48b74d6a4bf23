//! Mean-value analysis of the 1-limited random polling system.
//!
//! The general path covers nonzero switchover times and arbitrary service
//! and switchover moments. The WLAN instantiation (deterministic service of
//! `1/C`, uniform selection, switchover `ε`) collapses to a closed form as
//! `ε → 0`, exposed as [`mean_delay_zero_switchover`].
//!
//! All delays are sojourn times: arrival at the queue to departure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed when checking `m2 >= m^2` and `sum(gamma) == 1`.
const MOMENT_SLACK: f64 = 1e-12;

/// An `n`-queue, single-server random polling system with Poisson arrivals.
///
/// Rates are in packets per second, times in seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPollingConfig")]
pub struct PollingConfig {
    pub n: usize,
    pub lambda: Vec<f64>,
    /// Selection probability of each queue at a polling epoch.
    pub gamma: Vec<f64>,
    pub service_mean: Vec<f64>,
    pub service_m2: Vec<f64>,
    /// Mean switchover after visiting each queue.
    pub switch_mean: Vec<f64>,
    pub switch_m2: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPollingConfig {
    n: usize,
    lambda: Vec<f64>,
    gamma: Vec<f64>,
    service_mean: Vec<f64>,
    service_m2: Vec<f64>,
    switch_mean: Vec<f64>,
    switch_m2: Vec<f64>,
}

impl TryFrom<RawPollingConfig> for PollingConfig {
    type Error = Error;

    fn try_from(raw: RawPollingConfig) -> Result<Self> {
        let cfg = PollingConfig {
            n: raw.n,
            lambda: raw.lambda,
            gamma: raw.gamma,
            service_mean: raw.service_mean,
            service_m2: raw.service_m2,
            switch_mean: raw.switch_mean,
            switch_m2: raw.switch_m2,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Analytic per-queue results for a polling configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayReport {
    pub rho_i: Vec<f64>,
    pub rho: f64,
    /// Mean sojourn time per queue (s).
    pub e_w: Vec<f64>,
    pub e_q: Vec<f64>,
    pub p_nonempty: Vec<f64>,
}

impl PollingConfig {
    pub fn new(
        lambda: Vec<f64>,
        gamma: Vec<f64>,
        service_mean: Vec<f64>,
        service_m2: Vec<f64>,
        switch_mean: Vec<f64>,
        switch_m2: Vec<f64>,
    ) -> Result<Self> {
        let cfg = PollingConfig {
            n: lambda.len(),
            lambda,
            gamma,
            service_mean,
            service_m2,
            switch_mean,
            switch_m2,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(Error::config("polling system needs at least one queue"));
        }
        let vectors = [
            ("lambda", &self.lambda),
            ("gamma", &self.gamma),
            ("service_mean", &self.service_mean),
            ("service_m2", &self.service_m2),
            ("switch_mean", &self.switch_mean),
            ("switch_m2", &self.switch_m2),
        ];
        for (name, v) in vectors {
            if v.len() != n {
                return Err(Error::config(format!(
                    "{name} has length {}, expected n = {n}",
                    v.len()
                )));
            }
            if let Some(x) = v.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::config(format!(
                    "{name} entries must be finite and >= 0, found {x}"
                )));
            }
        }
        if let Some(i) = self.lambda.iter().position(|&l| l <= 0.0) {
            return Err(Error::config(format!(
                "queue {i} has arrival rate 0; drop it and renormalize gamma"
            )));
        }
        // A lone queue is polled with certainty.
        if let Some(g) = self
            .gamma
            .iter()
            .find(|&&g| g <= 0.0 || g > 1.0 || (n > 1 && g >= 1.0))
        {
            return Err(Error::config(format!(
                "selection probabilities must lie in (0, 1), found {g}"
            )));
        }
        let total: f64 = self.gamma.iter().sum();
        if (total - 1.0).abs() > MOMENT_SLACK * n as f64 {
            return Err(Error::config(format!(
                "selection probabilities sum to {total}, expected 1"
            )));
        }
        for i in 0..n {
            let (m, m2) = (self.service_mean[i], self.service_m2[i]);
            if m2 < m * m * (1.0 - MOMENT_SLACK) {
                return Err(Error::config(format!(
                    "queue {i}: service second moment {m2} < mean^2 {}",
                    m * m
                )));
            }
            let (m, m2) = (self.switch_mean[i], self.switch_m2[i]);
            if m2 < m * m * (1.0 - MOMENT_SLACK) {
                return Err(Error::config(format!(
                    "queue {i}: switchover second moment {m2} < mean^2 {}",
                    m * m
                )));
            }
        }
        Ok(())
    }

    /// Mean switchover per period, weighted by selection probability.
    pub fn mean_switchover(&self) -> f64 {
        self.switch_mean
            .iter()
            .zip(&self.gamma)
            .map(|(s, g)| s * g)
            .sum()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "queue index {i} out of range for n = {}",
                self.n
            )))
        }
    }

    /// System utilization, failing when the system cannot be stable.
    fn stable_rho(&self) -> Result<f64> {
        let (_, rho) = utilization(self);
        if rho >= 1.0 {
            Err(Error::Unstable { rho })
        } else {
            Ok(rho)
        }
    }
}

/// WLAN instantiation: deterministic service `1/C`, uniform selection and
/// deterministic switchover `epsilon` after every visit.
pub fn wlan_config(lambda: &[f64], capacity: f64, epsilon: f64) -> Result<PollingConfig> {
    if !(capacity.is_finite() && capacity > 0.0) {
        return Err(Error::domain(format!(
            "capacity must be > 0, got {capacity}"
        )));
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::domain(format!(
            "switchover must be >= 0, got {epsilon}"
        )));
    }
    let n = lambda.len();
    let service = 1.0 / capacity;
    PollingConfig::new(
        lambda.to_vec(),
        vec![1.0 / n as f64; n],
        vec![service; n],
        vec![service * service; n],
        vec![epsilon; n],
        vec![epsilon * epsilon; n],
    )
}

/// Per-queue loads `λ_i p_i` and their sum.
pub fn utilization(cfg: &PollingConfig) -> (Vec<f64>, f64) {
    let rho_i: Vec<f64> = cfg
        .lambda
        .iter()
        .zip(&cfg.service_mean)
        .map(|(l, p)| l * p)
        .collect();
    let rho = rho_i.iter().sum();
    (rho_i, rho)
}

/// Second-order arrival/period interaction term `∇_ij` for independent
/// Poisson sources.
pub fn nabla(cfg: &PollingConfig, i: usize, j: usize) -> Result<f64> {
    cfg.check_index(i)?;
    cfg.check_index(j)?;
    let rho = cfg.stable_rho()?;
    Ok(nabla_unchecked(cfg, i, j, rho, common_term(cfg, rho)))
}

/// `Σ_k [γ_k s_k^(2) + (p_k^(2) + 2 s_k p_k) λ_k s / (1-ρ)]`, shared by every `∇_ij`.
fn common_term(cfg: &PollingConfig, rho: f64) -> f64 {
    let s = cfg.mean_switchover();
    (0..cfg.n)
        .map(|k| {
            cfg.gamma[k] * cfg.switch_m2[k]
                + (cfg.service_m2[k] + 2.0 * cfg.switch_mean[k] * cfg.service_mean[k])
                    * cfg.lambda[k]
                    * s
                    / (1.0 - rho)
        })
        .sum()
}

fn nabla_unchecked(cfg: &PollingConfig, i: usize, j: usize, rho: f64, common: f64) -> f64 {
    let s = cfg.mean_switchover();
    let (li, lj) = (cfg.lambda[i], cfg.lambda[j]);
    let diagonal = if i == j {
        2.0 * li * s / (1.0 - rho)
    } else {
        0.0
    };
    let periods =
        cfg.switch_mean[i] + cfg.switch_mean[j] + cfg.service_mean[i] + cfg.service_mean[j];
    li * lj * common + diagonal - li * lj * s * periods / (1.0 - rho)
}

/// `(χ_i, ψ_i)`; fails when `χ_i <= 0`.
pub fn chi_psi(cfg: &PollingConfig, i: usize) -> Result<(f64, f64)> {
    cfg.check_index(i)?;
    let rho = cfg.stable_rho()?;
    let common = common_term(cfg, rho);
    chi_psi_unchecked(cfg, i, rho, common)
}

fn chi_psi_unchecked(cfg: &PollingConfig, i: usize, rho: f64, common: f64) -> Result<(f64, f64)> {
    let s = cfg.mean_switchover();
    let (li, gi) = (cfg.lambda[i], cfg.gamma[i]);
    let chi = 1.0 - s * li / gi - rho * s * li / (2.0 * gi * (1.0 - rho));
    if chi <= 0.0 {
        return Err(Error::infeasible(format!(
            "chi_{i} = {chi} <= 0; switchover too long for this load"
        )));
    }
    let cross: f64 = (0..cfg.n)
        .map(|l| cfg.service_mean[l] * nabla_unchecked(cfg, i, l, rho, common))
        .sum();
    let psi = nabla_unchecked(cfg, i, i, rho, common) / (2.0 * gi)
        + li / (2.0 * gi * (1.0 - rho)) * cross;
    Ok((chi, psi))
}

/// All `(χ_l, ψ_l)` pairs, each needed by every `E[Q_i]`.
fn all_chi_psi(cfg: &PollingConfig, rho: f64) -> Result<Vec<(f64, f64)>> {
    let common = common_term(cfg, rho);
    (0..cfg.n)
        .map(|l| chi_psi_unchecked(cfg, l, rho, common))
        .collect()
}

fn queue_length_from(cfg: &PollingConfig, i: usize, rho: f64, cp: &[(f64, f64)]) -> Result<f64> {
    let s = cfg.mean_switchover();
    let weighted: f64 = cp
        .iter()
        .zip(&cfg.service_mean)
        .map(|((chi, psi), p)| p * psi / chi)
        .sum();
    let coupling: f64 = (0..cfg.n)
        .map(|l| {
            cfg.service_mean[l] * cfg.lambda[l].powi(2) * s
                / (2.0 * cfg.gamma[l] * (1.0 - rho) * cp[l].0)
        })
        .sum();
    let denominator = 1.0 - coupling;
    if denominator <= 0.0 {
        return Err(Error::infeasible(format!(
            "queue-length denominator {denominator} <= 0"
        )));
    }
    let (chi, psi) = cp[i];
    let (li, gi) = (cfg.lambda[i], cfg.gamma[i]);
    Ok(psi / chi + s * li * li / (2.0 * gi * (1.0 - rho) * chi) * weighted / denominator)
}

/// Mean queue length `E[Q_i]`.
pub fn mean_queue_length(cfg: &PollingConfig, i: usize) -> Result<f64> {
    cfg.check_index(i)?;
    let rho = cfg.stable_rho()?;
    let cp = all_chi_psi(cfg, rho)?;
    queue_length_from(cfg, i, rho, &cp)
}

/// Probability that queue `i` is non-empty when the server polls it.
pub fn prob_nonempty(cfg: &PollingConfig, i: usize) -> Result<f64> {
    cfg.check_index(i)?;
    let rho = cfg.stable_rho()?;
    prob_nonempty_unchecked(cfg, i, rho)
}

fn prob_nonempty_unchecked(cfg: &PollingConfig, i: usize, rho: f64) -> Result<f64> {
    let prob = cfg.mean_switchover() * cfg.lambda[i] / (cfg.gamma[i] * (1.0 - rho));
    if prob > 1.0 {
        return Err(Error::infeasible(format!("P(Q_{i} >= 1) = {prob} > 1")));
    }
    Ok(prob)
}

/// Mean sojourn time of queue `i` with nonzero switchover.
pub fn mean_delay(cfg: &PollingConfig, i: usize) -> Result<f64> {
    cfg.check_index(i)?;
    let rho = cfg.stable_rho()?;
    let cp = all_chi_psi(cfg, rho)?;
    delay_from(cfg, i, rho, &cp)
}

fn delay_from(cfg: &PollingConfig, i: usize, rho: f64, cp: &[(f64, f64)]) -> Result<f64> {
    let q = queue_length_from(cfg, i, rho, cp)?;
    let prob = prob_nonempty_unchecked(cfg, i, rho)?;
    if prob <= 0.0 {
        return Err(Error::domain(
            "zero switchover: the general formula degenerates, use mean_delay_zero_switchover",
        ));
    }
    let li = cfg.lambda[i];
    let rho_i = li * cfg.service_mean[i];
    Ok(q / (li * prob) - (1.0 - rho_i) / li)
}

/// Every per-queue quantity at once.
pub fn delay_report(cfg: &PollingConfig) -> Result<DelayReport> {
    let rho = cfg.stable_rho()?;
    let (rho_i, _) = utilization(cfg);
    let cp = all_chi_psi(cfg, rho)?;
    let mut report = DelayReport {
        rho_i,
        rho,
        e_w: Vec::new(),
        e_q: Vec::new(),
        p_nonempty: Vec::new(),
    };
    for i in 0..cfg.n {
        report.e_q.push(queue_length_from(cfg, i, rho, &cp)?);
        report
            .p_nonempty
            .push(prob_nonempty_unchecked(cfg, i, rho)?);
        report.e_w.push(delay_from(cfg, i, rho, &cp)?);
    }
    Ok(report)
}

/// Closed-form mean sojourn time for zero switchover, deterministic service
/// at rate `capacity` and uniform selection: `(2-ρ) / (2C(1-ρ))`.
///
/// Depends on the rates only through their sum, so every queue sees the
/// same mean delay.
pub fn mean_delay_zero_switchover(lambda: &[f64], capacity: f64) -> Result<f64> {
    if !(capacity.is_finite() && capacity > 0.0) {
        return Err(Error::domain(format!(
            "capacity must be > 0, got {capacity}"
        )));
    }
    if lambda.is_empty() {
        return Err(Error::domain("need at least one arrival rate"));
    }
    if let Some(l) = lambda.iter().find(|l| !l.is_finite() || **l < 0.0) {
        return Err(Error::domain(format!(
            "arrival rates must be finite and >= 0, found {l}"
        )));
    }
    let rho = lambda.iter().sum::<f64>() / capacity;
    if rho >= 1.0 {
        return Err(Error::Unstable { rho });
    }
    Ok((2.0 - rho) / (2.0 * capacity * (1.0 - rho)))
}
