//! Experiment orchestration behind the `wlan-delay` binary: resolves an
//! [`ExperimentSpec`], runs the analytic models and simulators, and renders
//! deterministic CSV.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{apply_param, ExperimentConfig};
use crate::dcf::{
    aggregate_throughput, slot_model, solve_fixed_point, throughput_curve, DcfParams,
    DEFAULT_TOLERANCE,
};
use crate::dcf_sim::{
    delay_vs_load_sweep, delay_vs_n_sweep, replicate_dcf, DcfSimConfig, RunSettings, SweepRow,
    Traffic,
};
use crate::error::{Error, Result};
use crate::polling::{delay_report, mean_delay_zero_switchover, wlan_config, PollingConfig};
use crate::polling_sim::{replicate_polling, PollingMode, PollingSimConfig, TimeDist};
use crate::sim::ConfidenceInterval;
use crate::PUBLISHED_CAPACITY;

/// One row of a published comparison table (delays in ms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub lambda: &'static [f64],
    pub simulated_ms: &'static [f64],
    pub analytic_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedTable {
    pub id: u8,
    pub n: usize,
    pub rows: &'static [PublishedRow],
}

const fn row(
    lambda: &'static [f64],
    simulated_ms: &'static [f64],
    analytic_ms: f64,
) -> PublishedRow {
    PublishedRow {
        lambda,
        simulated_ms,
        analytic_ms,
    }
}

/// The four published delay tables: 1500 byte packets at 1 Mbit/s,
/// aggregate load near 60 (tables 1, 3) or 30 (tables 2, 4) packets/s.
pub const PUBLISHED_TABLES: [PublishedTable; 4] = [
    PublishedTable {
        id: 1,
        n: 3,
        rows: &[
            row(&[10.0, 30.3, 20.0], &[42.4, 42.6, 42.1], 47.9),
            row(&[20.0, 20.0, 20.0], &[43.9, 45.5, 43.5], 46.9),
            row(&[2.0, 29.4, 29.4], &[42.6, 40.5, 43.5], 49.7),
            row(&[1.0, 1.0, 58.8], &[34.6, 35.9, 34.9], 49.7),
        ],
    },
    PublishedTable {
        id: 2,
        n: 3,
        rows: &[
            row(&[10.0, 10.0, 10.0], &[18.8, 18.4, 18.3], 18.7),
            row(&[5.0, 10.0, 14.9], &[18.5, 18.4, 18.3], 18.6),
            row(&[1.0, 1.0, 27.8], &[18.9, 18.5, 18.3], 18.6),
            row(&[5.0, 12.5, 12.5], &[18.5, 18.3, 18.2], 18.6),
            // Repeats a table 1 row despite the ~30 pkts/s caption.
            row(&[1.0, 1.0, 58.8], &[34.6, 35.9, 34.9], 49.7),
        ],
    },
    PublishedTable {
        id: 3,
        n: 4,
        rows: &[
            row(&[14.9, 14.9, 14.9, 14.9], &[44.1, 43.9, 44.1, 43.3], 45.9),
            row(&[1.0, 19.6, 19.6, 19.6], &[41.7, 42.7, 41.5, 42.7], 46.3),
            row(&[7.5, 12.5, 17.5, 22.2], &[42.1, 42.0, 41.3, 41.2], 46.2),
            row(&[1.5, 1.5, 1.5, 55.5], &[30.5, 32.7, 32.2, 32.4], 46.8),
        ],
    },
    PublishedTable {
        id: 4,
        n: 4,
        rows: &[
            row(&[7.5, 7.5, 7.5, 7.5], &[18.9, 18.7, 18.5, 18.3], 18.6),
            row(&[3.7, 6.3, 8.7, 11.1], &[18.7, 18.5, 18.5, 18.4], 18.6),
            row(&[0.5, 9.8, 9.8, 9.8], &[19.1, 18.8, 19.3, 18.9], 18.6),
            row(&[0.5, 0.5, 0.5, 27.8], &[20.7, 20.3, 20.6, 20.4], 18.5),
        ],
    },
];

pub fn published_table(id: u8) -> Result<&'static PublishedTable> {
    PUBLISHED_TABLES
        .iter()
        .find(|t| t.id == id)
        .ok_or_else(|| Error::config(format!("table id must be 1..=4, got {id}")))
}

/// Simulated and analytic results for one published row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRowResult {
    pub lambda: Vec<f64>,
    /// Per-node simulated mean delay (s); empty when the row is unstable.
    pub simulated: Vec<ConfidenceInterval>,
    /// Closed form with the comparison capacity (s).
    pub analytic: Option<f64>,
    /// Closed form with the computed saturation throughput C(n) (s).
    pub analytic_computed_c: Option<f64>,
    pub published_simulated_ms: Vec<f64>,
    pub published_analytic_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableReport {
    pub id: u8,
    pub n: usize,
    pub capacity: f64,
    pub computed_capacity: f64,
    pub rows: Vec<TableRowResult>,
}

fn stable_delay(lambda: &[f64], capacity: f64) -> Result<Option<f64>> {
    match mean_delay_zero_switchover(lambda, capacity) {
        Ok(d) => Ok(Some(d)),
        Err(Error::Unstable { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Reruns a published table: DCF simulation per row plus the closed form with
/// `capacity` (72.5 pkts/s unless overridden) and with the computed C(n).
pub fn run_table(
    id: u8,
    c_override: Option<f64>,
    params: &DcfParams,
    settings: RunSettings,
) -> Result<TableReport> {
    let table = published_table(id)?;
    let capacity = c_override.unwrap_or(PUBLISHED_CAPACITY);
    let computed_capacity = aggregate_throughput(table.n, params)?;
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let analytic = stable_delay(row.lambda, capacity)?;
            let simulated = match analytic {
                Some(_) => {
                    let cfg = DcfSimConfig::poisson(
                        row.lambda,
                        *params,
                        settings.horizon,
                        settings.warmup,
                    )?;
                    replicate_dcf(&cfg, settings)?.delay
                }
                None => Vec::new(),
            };
            Ok(TableRowResult {
                lambda: row.lambda.to_vec(),
                simulated,
                analytic,
                analytic_computed_c: stable_delay(row.lambda, computed_capacity)?,
                published_simulated_ms: row.simulated_ms.to_vec(),
                published_analytic_ms: row.analytic_ms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport {
        id,
        n: table.n,
        capacity,
        computed_capacity,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    FixedPoint,
    Throughput,
    AnalyticDelay,
    SimPolling,
    SimDcf,
    Table,
    SweepLambda,
    SweepN,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::FixedPoint => "fixed-point",
            Command::Throughput => "throughput",
            Command::AnalyticDelay => "analytic-delay",
            Command::SimPolling => "sim-polling",
            Command::SimDcf => "sim-dcf",
            Command::Table => "table",
            Command::SweepLambda => "sweep-lambda",
            Command::SweepN => "sweep-n",
        }
    }
}

/// Fully resolved experiment: configuration file values with command-line
/// overrides applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub command: Command,
    pub config_path: Option<PathBuf>,
    /// `key=value` DCF parameter overrides, applied after the config file.
    pub overrides: Vec<String>,
    pub params: DcfParams,
    pub settings: RunSettings,
    pub n: Option<usize>,
    pub n_min: usize,
    pub n_max: usize,
    pub n_grid: Vec<usize>,
    pub lambda: Vec<f64>,
    pub c_override: Option<f64>,
    /// Use the computed C(n) instead of the comparison capacity.
    pub computed_c: bool,
    pub table: Option<u8>,
    pub epsilon: f64,
    pub mode: Option<PollingMode>,
    pub service_dist: TimeDist,
    pub polling: Option<PollingConfig>,
    pub saturated: bool,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
}

impl ExperimentSpec {
    pub fn new(command: Command) -> Self {
        ExperimentSpec {
            command,
            config_path: None,
            overrides: Vec::new(),
            params: DcfParams::default(),
            settings: RunSettings::default(),
            n: None,
            n_min: 2,
            n_max: 30,
            n_grid: Vec::new(),
            lambda: Vec::new(),
            c_override: None,
            computed_c: false,
            table: None,
            epsilon: 0.0,
            mode: None,
            service_dist: TimeDist::Deterministic,
            polling: None,
            saturated: false,
            output_path: None,
        }
    }

    /// Starts from a configuration file's values.
    pub fn from_config(command: Command, config: &ExperimentConfig) -> Result<Self> {
        let mut spec = ExperimentSpec::new(command);
        spec.params = config.dcf_params()?;
        spec.polling = config.polling.clone();
        spec.n = config.n;
        if let Some(lambda) = &config.lambda {
            spec.lambda = lambda.clone();
        }
        spec.c_override = config.c_override;
        let s = &mut spec.settings;
        s.seed = config.seed.unwrap_or(s.seed);
        s.reps = config.reps.unwrap_or(s.reps);
        s.horizon = config.horizon.unwrap_or(s.horizon);
        s.warmup = config.warmup.unwrap_or(s.warmup);
        spec.epsilon = config.epsilon.unwrap_or(0.0);
        Ok(spec)
    }

    /// Applies `key=value` overrides to the DCF parameters.
    pub fn apply_overrides(&mut self, overrides: &[String]) -> Result<()> {
        for entry in overrides {
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| Error::config(format!("override {entry:?} is not key=value")))?;
            apply_param(&mut self.params, key, value)?;
            self.overrides.push(entry.clone());
        }
        self.params.validate()
    }

    pub fn validate(&self) -> Result<()> {
        if self.settings.reps < 1 {
            return Err(Error::config("reps must be >= 1"));
        }
        if let Some(id) = self.table {
            published_table(id)?;
        }
        if let Some(c) = self.c_override {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::config(format!(
                    "capacity override must be > 0, got {c}"
                )));
            }
        }
        self.params.validate()
    }

    /// Short SHA-256 of the resolved spec, output path excluded.
    pub fn config_hash(&self) -> String {
        short_hash(&serde_json::to_vec(self).expect("spec serializes"))
    }
}

fn short_hash(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .take(8)
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

pub fn params_hash(params: &DcfParams) -> String {
    short_hash(&serde_json::to_vec(params).expect("params serialize"))
}

/// A CSV document: `#` comment lines, one header row, data rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Csv {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    fn with_header(columns: &[&str]) -> Self {
        Csv {
            header: columns.iter().map(|c| c.to_string()).collect(),
            ..Csv::default()
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let _ = writeln!(out, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }

    /// Parses a numeric column back out (comments skipped).
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| r[k].parse().unwrap_or(f64::NAN))
                .collect(),
        )
    }
}

/// Shortest round-trip formatting; empty for missing values.
fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else {
        String::new()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn ms(x: f64) -> f64 {
    x * 1e3
}

/// Runs the experiment and returns its CSV.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Csv> {
    spec.validate()?;
    let mut csv = match spec.command {
        Command::FixedPoint => fixed_point_csv(spec)?,
        Command::Throughput => throughput_csv(spec)?,
        Command::AnalyticDelay => analytic_csv(spec)?,
        Command::SimPolling => sim_polling_csv(spec)?,
        Command::SimDcf => sim_dcf_csv(spec)?,
        Command::Table => table_csv(spec)?,
        Command::SweepLambda | Command::SweepN => sweep_csv(spec)?,
    };
    let s = &spec.settings;
    let mut comments = vec![
        format!("wlan-delay {}", env!("CARGO_PKG_VERSION")),
        format!(
            "command={} seed={} reps={} horizon={} warmup={}",
            spec.command.name(),
            s.seed,
            s.reps,
            s.horizon,
            s.warmup
        ),
        format!(
            "config_hash={} params_hash={}",
            spec.config_hash(),
            params_hash(&spec.params)
        ),
    ];
    comments.append(&mut csv.comments);
    csv.comments = comments;
    Ok(csv)
}

fn fixed_point_csv(spec: &ExperimentSpec) -> Result<Csv> {
    let mut csv = Csv::with_header(&["n", "p", "beta", "residual", "iterations"]);
    let grid = if spec.n_grid.is_empty() {
        vec![spec.n.unwrap_or(3)]
    } else {
        spec.n_grid.clone()
    };
    for n in grid {
        let fp = solve_fixed_point(n, &spec.params, DEFAULT_TOLERANCE)?;
        csv.push(vec![
            n.to_string(),
            num(fp.p),
            num(fp.beta),
            num(fp.residual),
            fp.iterations.to_string(),
        ]);
    }
    Ok(csv)
}

fn throughput_csv(spec: &ExperimentSpec) -> Result<Csv> {
    let mut csv = Csv::with_header(&[
        "n",
        "throughput_pps",
        "p",
        "beta",
        "p_success",
        "p_idle",
        "p_collision",
    ]);
    for (n, throughput) in throughput_curve(spec.n_min, spec.n_max, &spec.params)? {
        let fp = solve_fixed_point(n, &spec.params, DEFAULT_TOLERANCE)?;
        let pr = slot_model(n, &spec.params)?.probabilities;
        csv.push(vec![
            n.to_string(),
            num(throughput),
            num(fp.p),
            num(fp.beta),
            num(pr.success),
            num(pr.idle),
            num(pr.collision),
        ]);
    }
    Ok(csv)
}

fn require_lambda(spec: &ExperimentSpec) -> Result<&[f64]> {
    if spec.lambda.is_empty() {
        Err(Error::config("this command needs arrival rates (--lambda)"))
    } else {
        Ok(&spec.lambda)
    }
}

/// Comparison capacity and the computed C(n) (when `n >= 2`).
fn capacities(spec: &ExperimentSpec, n: usize) -> Result<(f64, Option<f64>)> {
    let computed = if n >= 2 {
        Some(aggregate_throughput(n, &spec.params)?)
    } else {
        None
    };
    let capacity = match (spec.computed_c, computed) {
        (true, Some(c)) => c,
        (true, None) => return Err(Error::config("computed capacity needs at least 2 nodes")),
        (false, _) => spec.c_override.unwrap_or(PUBLISHED_CAPACITY),
    };
    Ok((capacity, computed))
}

fn analytic_csv(spec: &ExperimentSpec) -> Result<Csv> {
    let lambda = require_lambda(spec)?;
    let (capacity, computed) = capacities(spec, lambda.len())?;
    let delay = mean_delay_zero_switchover(lambda, capacity)?;
    let computed_delay = match computed {
        Some(c) => stable_delay(lambda, c)?,
        None => None,
    };
    let lee = if spec.epsilon > 0.0 {
        Some(delay_report(&wlan_config(lambda, capacity, spec.epsilon)?)?)
    } else {
        None
    };
    let mut csv = Csv::with_header(&[
        "queue_id",
        "lambda",
        "rho",
        "capacity_pps",
        "delay_s",
        "delay_ms",
        "computed_capacity_pps",
        "computed_delay_ms",
        "lee_delay_ms",
    ]);
    let rho = lambda.iter().sum::<f64>() / capacity;
    for (i, l) in lambda.iter().enumerate() {
        csv.push(vec![
            i.to_string(),
            num(*l),
            num(rho),
            num(capacity),
            num(delay),
            num(ms(delay)),
            opt(computed),
            opt(computed_delay.map(ms)),
            opt(lee.as_ref().map(|r| ms(r.e_w[i]))),
        ]);
    }
    Ok(csv)
}

fn sim_polling_csv(spec: &ExperimentSpec) -> Result<Csv> {
    let (base, default_mode) = match &spec.polling {
        Some(p) => (
            p.clone(),
            if p.mean_switchover() > 0.0 {
                PollingMode::Lee
            } else {
                PollingMode::ZeroSwitchover
            },
        ),
        None => {
            let lambda = require_lambda(spec)?;
            let (capacity, _) = capacities(spec, lambda.len())?;
            let mut base = wlan_config(lambda, capacity, spec.epsilon)?;
            if spec.service_dist == TimeDist::Exponential {
                base.service_m2 = base.service_mean.iter().map(|m| 2.0 * m * m).collect();
            }
            let mode = if spec.epsilon > 0.0 {
                PollingMode::Lee
            } else {
                PollingMode::ZeroSwitchover
            };
            (base, mode)
        }
    };
    let cfg = PollingSimConfig {
        base,
        mode: spec.mode.unwrap_or(default_mode),
        service_dist: spec.service_dist,
        switch_dist: TimeDist::Deterministic,
        horizon: spec.settings.horizon,
        warmup: spec.settings.warmup,
    };
    let summary = replicate_polling(&cfg, spec.settings.reps, spec.settings.seed)?;
    let mut csv = Csv::with_header(&[
        "queue_id",
        "lambda",
        "mean_sojourn_s",
        "ci_halfwidth_s",
        "mean_qlen",
        "p_nonempty",
    ]);
    csv.comments.push(format!(
        "mode={:?} busy_fraction={}",
        cfg.mode,
        num(summary.busy_fraction.mean)
    ));
    for i in 0..cfg.base.n {
        csv.push(vec![
            i.to_string(),
            num(cfg.base.lambda[i]),
            num(summary.sojourn[i].mean),
            num(summary.sojourn[i].halfwidth),
            num(summary.qlen[i].mean),
            num(summary.p_nonempty[i].mean),
        ]);
    }
    Ok(csv)
}

fn sim_dcf_csv(spec: &ExperimentSpec) -> Result<Csv> {
    let cfg = if spec.saturated || spec.lambda.is_empty() {
        let n = spec
            .n
            .ok_or_else(|| Error::config("saturated runs need --n"))?;
        DcfSimConfig::saturated(n, spec.params, spec.settings.horizon, spec.settings.warmup)?
    } else {
        DcfSimConfig::poisson(
            &spec.lambda,
            spec.params,
            spec.settings.horizon,
            spec.settings.warmup,
        )?
    };
    let summary = replicate_dcf(&cfg, spec.settings)?;
    let mut csv = Csv::with_header(&[
        "node_id",
        "lambda",
        "mean_delay_s",
        "ci_halfwidth_s",
        "throughput_pps",
    ]);
    csv.comments.push(format!(
        "aggregate_throughput_pps={} beta_hat={} p_hat={}",
        num(summary.aggregate_throughput.mean),
        num(summary.beta_hat.mean),
        num(summary.p_hat.mean)
    ));
    for i in 0..cfg.n {
        let (lambda, delay) = match &cfg.traffic {
            Traffic::Poisson(l) => (num(l[i]), Some(summary.delay[i])),
            Traffic::Saturated => (String::new(), None),
        };
        csv.push(vec![
            i.to_string(),
            lambda,
            opt(delay.map(|d| d.mean)),
            opt(delay.map(|d| d.halfwidth)),
            num(summary.throughput[i].mean),
        ]);
    }
    Ok(csv)
}

fn table_csv(spec: &ExperimentSpec) -> Result<Csv> {
    let id = spec
        .table
        .ok_or_else(|| Error::config("table command needs --table"))?;
    let report = run_table(id, spec.c_override, &spec.params, spec.settings)?;
    let mut csv = Csv::with_header(&[
        "row",
        "node",
        "lambda",
        "sim_ms",
        "ci_ms",
        "paper_sim_ms",
        "analytic_ms",
        "paper_analytic_ms",
        "computed_c_analytic_ms",
    ]);
    csv.comments.push(format!(
        "table={} n={} capacity_pps={} computed_capacity_pps={}",
        report.id,
        report.n,
        num(report.capacity),
        num(report.computed_capacity)
    ));
    for (r, row) in report.rows.iter().enumerate() {
        for (node, l) in row.lambda.iter().enumerate() {
            let sim = row.simulated.get(node);
            csv.push(vec![
                r.to_string(),
                node.to_string(),
                num(*l),
                opt(sim.map(|c| ms(c.mean))),
                opt(sim.map(|c| ms(c.halfwidth))),
                num(row.published_simulated_ms[node]),
                opt(row.analytic.map(ms)),
                num(row.published_analytic_ms),
                opt(row.analytic_computed_c.map(ms)),
            ]);
        }
    }
    Ok(csv)
}

/// Default per-node rates for the load sweep (5 nodes, up to and past capacity).
pub const DEFAULT_LOAD_GRID: [f64; 10] = [1.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 13.0, 14.0, 14.6];

fn sweep_csv(spec: &ExperimentSpec) -> Result<Csv> {
    let (rows, first) = match spec.command {
        Command::SweepLambda => {
            let grid = if spec.lambda.is_empty() {
                DEFAULT_LOAD_GRID.to_vec()
            } else {
                spec.lambda.clone()
            };
            (
                delay_vs_load_sweep(spec.n.unwrap_or(5), &grid, &spec.params, spec.settings)?,
                "lambda",
            )
        }
        _ => {
            let lambda = spec.lambda.first().copied().unwrap_or(10.0);
            let grid = if spec.n_grid.is_empty() {
                (2..=7).collect()
            } else {
                spec.n_grid.clone()
            };
            (
                delay_vs_n_sweep(lambda, &grid, &spec.params, spec.settings)?,
                "n",
            )
        }
    };
    let mut csv = Csv::with_header(&[
        first,
        "sim_ms",
        "ci_ms",
        "analytic_ms",
        "capacity_pps",
        "stable",
    ]);
    for SweepRow {
        n,
        lambda,
        capacity,
        stable,
        simulated,
        analytic,
    } in rows
    {
        let x = if first == "n" {
            n.to_string()
        } else {
            num(lambda)
        };
        csv.push(vec![
            x,
            opt(simulated.map(|c| ms(c.mean))),
            opt(simulated.map(|c| ms(c.halfwidth))),
            opt(analytic.map(ms)),
            num(capacity),
            stable.to_string(),
        ]);
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_tables_are_well_formed() {
        for t in &PUBLISHED_TABLES {
            for r in t.rows {
                assert_eq!(r.lambda.len(), t.n);
                assert_eq!(r.simulated_ms.len(), t.n);
            }
        }
        assert!(published_table(5).is_err());
    }

    #[test]
    fn analytic_delay_csv() {
        let mut spec = ExperimentSpec::new(Command::AnalyticDelay);
        spec.lambda = vec![10.0, 10.0, 10.0];
        let csv = run_experiment(&spec).unwrap();
        let d = csv.column("delay_ms").unwrap();
        assert!(d.iter().all(|x| (x - 18.66).abs() < 5e-3));
        assert!(csv.render().starts_with("# wlan-delay "));
        let computed = csv.column("computed_capacity_pps").unwrap();
        assert!((computed[0] - 73.16).abs() < 0.01);
    }

    #[test]
    fn throughput_csv_has_one_row_per_n() {
        let spec = ExperimentSpec::new(Command::Throughput);
        let csv = run_experiment(&spec).unwrap();
        assert_eq!(csv.rows.len(), 29);
        let curve = throughput_curve(2, 30, &DcfParams::default()).unwrap();
        let col = csv.column("throughput_pps").unwrap();
        for ((_, c), x) in curve.iter().zip(col) {
            assert_eq!(*c, x);
        }
    }

    #[test]
    fn config_hash_ignores_output_path() {
        let mut a = ExperimentSpec::new(Command::FixedPoint);
        let mut b = a.clone();
        b.output_path = Some(PathBuf::from("/tmp/x.csv"));
        assert_eq!(a.config_hash(), b.config_hash());
        a.settings.seed = 99;
        assert_ne!(a.config_hash(), b.config_hash());
    }

    #[test]
    fn overrides_and_errors() {
        let mut spec = ExperimentSpec::new(Command::FixedPoint);
        spec.apply_overrides(&["cw_min_W=64".into()]).unwrap();
        assert_eq!(spec.params.cw_min, 64);
        assert!(spec.apply_overrides(&["cw_min_W".into()]).is_err());
        spec.table = Some(9);
        assert!(matches!(run_experiment(&spec), Err(Error::Config(_))));
        let spec = ExperimentSpec::new(Command::AnalyticDelay);
        assert!(matches!(run_experiment(&spec), Err(Error::Config(_))));
        let mut spec = ExperimentSpec::new(Command::AnalyticDelay);
        spec.lambda = vec![40.0, 40.0];
        assert!(matches!(run_experiment(&spec), Err(Error::Unstable { .. })));
    }
}
