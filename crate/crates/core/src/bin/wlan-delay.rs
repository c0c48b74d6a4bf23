use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wlan_delay::config::ExperimentConfig;
use wlan_delay::experiment::{run_experiment, Command, ExperimentSpec};
use wlan_delay::polling_sim::{PollingMode, TimeDist};
use wlan_delay::Error;

#[derive(Parser)]
#[command(
    name = "wlan-delay",
    version,
    about = "802.11 DCF mean delay: analytic polling model and simulators"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the collision-probability fixed point.
    FixedPoint(Opts),
    /// Saturation throughput C(n) over a range of n.
    Throughput(Opts),
    /// Closed-form mean delay per queue.
    AnalyticDelay(Opts),
    /// Abstract polling simulator.
    SimPolling(Opts),
    /// Slot-level DCF simulator.
    SimDcf(Opts),
    /// Rerun a published delay table.
    Table(Opts),
    /// Delay against per-node load at fixed n.
    SweepLambda(Opts),
    /// Delay against n at fixed per-node load.
    SweepN(Opts),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lee,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    Deterministic,
    Exponential,
}

#[derive(Args)]
struct Opts {
    /// JSON experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<u64>,
    /// Output CSV (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    table: Option<u8>,
    #[arg(long)]
    n: Option<usize>,
    /// Per-node arrival rates, pkts/s.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// Capacity for analytic comparisons, pkts/s (default 72.5).
    #[arg(long)]
    c_override: Option<f64>,
    /// Use the computed saturation throughput C(n) as capacity.
    #[arg(long)]
    computed_c: bool,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    warmup: Option<f64>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    /// Deterministic switchover time in seconds (Lee mode).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    service: Option<DistArg>,
    /// Saturated DCF sources (sim-dcf).
    #[arg(long)]
    saturated: bool,
    #[arg(long)]
    payload_bytes: Option<u64>,
    /// DCF parameter override, `key=value`; repeatable.
    #[arg(long = "set")]
    overrides: Vec<String>,
}

fn resolve(command: Command, o: Opts) -> wlan_delay::Result<ExperimentSpec> {
    let mut spec = match &o.config {
        Some(path) => ExperimentSpec::from_config(command, &ExperimentConfig::load(path)?)?,
        None => ExperimentSpec::new(command),
    };
    spec.config_path = o.config;
    let s = &mut spec.settings;
    s.seed = o.seed.unwrap_or(s.seed);
    s.reps = o.reps.unwrap_or(s.reps);
    s.horizon = o.horizon.unwrap_or(s.horizon);
    s.warmup = o.warmup.unwrap_or(s.warmup);
    spec.table = o.table;
    spec.n = o.n.or(spec.n);
    if let Some(l) = o.lambda {
        spec.lambda = l;
    }
    spec.c_override = o.c_override.or(spec.c_override);
    spec.computed_c = o.computed_c;
    spec.n_min = o.n_min.unwrap_or(spec.n_min);
    spec.n_max = o.n_max.unwrap_or(spec.n_max);
    if let Some(g) = o.n_grid {
        spec.n_grid = g;
    }
    spec.epsilon = o.epsilon.unwrap_or(spec.epsilon);
    spec.mode = o.mode.map(|m| match m {
        ModeArg::Lee => PollingMode::Lee,
        ModeArg::Zero => PollingMode::ZeroSwitchover,
    });
    if let Some(DistArg::Exponential) = o.service {
        spec.service_dist = TimeDist::Exponential;
    }
    spec.saturated = o.saturated;
    let mut overrides = o.overrides;
    if let Some(b) = o.payload_bytes {
        overrides.push(format!("payload_bytes={b}"));
    }
    spec.apply_overrides(&overrides)?;
    spec.output_path = o.out;
    Ok(spec)
}

fn run(cli: Cli) -> wlan_delay::Result<()> {
    let (command, opts) = match cli.command {
        Cmd::FixedPoint(o) => (Command::FixedPoint, o),
        Cmd::Throughput(o) => (Command::Throughput, o),
        Cmd::AnalyticDelay(o) => (Command::AnalyticDelay, o),
        Cmd::SimPolling(o) => (Command::SimPolling, o),
        Cmd::SimDcf(o) => (Command::SimDcf, o),
        Cmd::Table(o) => (Command::Table, o),
        Cmd::SweepLambda(o) => (Command::SweepLambda, o),
        Cmd::SweepN(o) => (Command::SweepN, o),
    };
    let spec = resolve(command, opts)?;
    let text = run_experiment(&spec)?.render();
    match &spec.output_path {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
