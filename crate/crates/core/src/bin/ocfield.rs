//! Command-line front end: `analytic`, `simulate`, `optimize` and
//! `figure <1|2|3|4>`, each writing CSV to stdout or `--output`.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ocfield::harness::{self, ConfigLayer, Figure, Report, ScenarioConfig};
use ocfield::Result;

#[derive(Parser)]
#[command(name = "ocfield", version, about = "Outage of optimum combining arrays in Poisson fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form outage and throughput over the density grid.
    Analytic(Opts),
    /// Monte Carlo outage next to the closed form.
    Simulate(Opts),
    /// Optimum contention density per array size.
    Optimize(Opts),
    /// Reproduce one of the four figures (flags override the preset).
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        number: u8,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Args)]
struct Opts {
    /// Flat JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    /// SINR threshold in dB.
    #[arg(long, allow_hyphen_values = true)]
    beta_db: Option<f64>,
    /// Desired link length in meters.
    #[arg(long)]
    d_r: Option<f64>,
    /// Noise level in dB.
    #[arg(long, allow_hyphen_values = true)]
    sigma2_db: Option<f64>,
    /// Linear noise level (0 for a noiseless scenario).
    #[arg(long)]
    sigma2: Option<f64>,
    /// Comma-separated antenna counts.
    #[arg(long, value_delimiter = ',')]
    antennas: Option<Vec<usize>>,
    /// Comma-separated receivers: oc, mrc, zf, pzf:K.
    #[arg(long, value_delimiter = ',')]
    receivers: Option<Vec<String>>,
    /// Comma-separated densities.
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,
    #[arg(long)]
    lambda_min: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long)]
    lambda_points: Option<usize>,
    #[arg(long)]
    n_trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Mean number of interferers in the simulated disk.
    #[arg(long)]
    expected_count: Option<u32>,
    #[arg(long)]
    workers: Option<usize>,
    /// Normalize Delta * gamma^(2/alpha) to one when optimizing.
    #[arg(long)]
    normalized: bool,
    /// Output CSV path (stdout if absent).
    #[arg(long, short)]
    output: Option<PathBuf>,
}

impl Opts {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            alpha: self.alpha,
            beta_db: self.beta_db,
            d_r: self.d_r,
            sigma2_db: self.sigma2_db,
            sigma2: self.sigma2,
            antennas: self.antennas.clone(),
            receivers: self.receivers.clone(),
            lambda_grid: self.lambda_grid.clone(),
            lambda_min: self.lambda_min,
            lambda_max: self.lambda_max,
            lambda_points: self.lambda_points,
            n_trials: self.n_trials,
            master_seed: self.seed,
            expected_count: self.expected_count,
            workers: self.workers,
            normalized: self.normalized.then_some(true),
            output: self.output.clone(),
        }
    }

    fn resolve(&self, preset: ConfigLayer) -> Result<ScenarioConfig> {
        let file = match &self.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        ScenarioConfig::resolve(preset.merge(file).merge(self.layer()))?.with_env_workers()
    }
}

fn run(cli: Cli) -> Result<()> {
    let (cfg, report) = match cli.command {
        Command::Analytic(o) => {
            let cfg = o.resolve(ConfigLayer::default())?;
            let r = Report::Analytic(harness::run_analytic(&cfg)?);
            (cfg, r)
        }
        Command::Simulate(o) => {
            let cfg = o.resolve(ConfigLayer::default())?;
            let r = Report::Simulation(harness::run_simulation(&cfg)?);
            (cfg, r)
        }
        Command::Optimize(o) => {
            let cfg = o.resolve(ConfigLayer::default())?;
            let r = Report::Optimize(harness::run_optimize(&cfg)?);
            (cfg, r)
        }
        Command::Figure { number, opts } => {
            let fig = Figure::from_number(number)?;
            let cfg = opts.resolve(fig.preset())?;
            let r = harness::run_figure(fig, &cfg)?;
            (cfg, r)
        }
    };
    log::info!("{} rows", report.len());
    let text = report.to_csv()?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ocfield: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
