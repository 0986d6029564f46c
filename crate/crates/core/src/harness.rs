//! Scenario configuration, experiment runners and CSV output behind the
//! `ocfield` command-line tool.
//!
//! A configuration is assembled from layers: a figure preset (optional), a
//! flat JSON file (optional) and command-line flags, later layers winning.
//! Thresholds and noise levels are given in dB at this boundary and
//! converted with `10^(dB/10)`.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::analytic::{
    db_to_linear, delta_const, outage_cdf, throughput_density, SystemParams,
};
use crate::contention::{contention_scale, numerical_optimum, ContentionOptimum};
use crate::error::{Error, Result};
use crate::field::{estimate_outage_multi, McConfig, Receiver};

/// Environment variable overriding the Monte Carlo worker count.
pub const THREADS_ENV: &str = "OC_FIELD_THREADS";

/// Header of the `simulate` CSV output.
pub const SIMULATION_HEADER: &str =
    "lambda,L,receiver,analytic_outage,mc_outage,stderr,n_trials,seed";

/// One configuration layer. Every field is optional; unknown keys are
/// rejected so typos surface as config errors.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub alpha: Option<f64>,
    pub beta_db: Option<f64>,
    pub d_r: Option<f64>,
    /// Noise level in dB relative to unit transmit power.
    pub sigma2_db: Option<f64>,
    /// Linear noise level; use this for a noiseless scenario.
    pub sigma2: Option<f64>,
    pub antennas: Option<Vec<usize>>,
    pub receivers: Option<Vec<String>>,
    pub lambda_grid: Option<Vec<f64>>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_points: Option<usize>,
    pub n_trials: Option<u64>,
    pub master_seed: Option<u64>,
    pub expected_count: Option<u32>,
    pub workers: Option<usize>,
    /// Optimize with `Delta gamma^(2/alpha)` normalized to one.
    pub normalized: Option<bool>,
    pub output: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $over:ident, $($f:ident),*) => {
        ConfigLayer { $($f: $over.$f.or($base.$f)),* }
    };
}

impl ConfigLayer {
    /// Parses a flat JSON object.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("config file", e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config file", format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Fields set in `over` replace those of `self`. Setting either noise key
    /// in `over` clears both noise keys of `self`, and the same holds for the
    /// explicit grid versus the generated grid.
    pub fn merge(self, over: ConfigLayer) -> ConfigLayer {
        let mut base = self;
        if over.sigma2.is_some() || over.sigma2_db.is_some() {
            base.sigma2 = None;
            base.sigma2_db = None;
        }
        if over.lambda_grid.is_some() {
            base.lambda_min = None;
            base.lambda_max = None;
            base.lambda_points = None;
        }
        if over.lambda_min.is_some() || over.lambda_max.is_some() || over.lambda_points.is_some() {
            base.lambda_grid = None;
        }
        overlay!(
            base, over, alpha, beta_db, d_r, sigma2_db, sigma2, antennas, receivers, lambda_grid,
            lambda_min, lambda_max, lambda_points, n_trials, master_seed, expected_count, workers,
            normalized, output
        )
    }
}

/// Fully resolved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub alpha: f64,
    pub beta_db: f64,
    pub d_r: f64,
    /// Linear noise level.
    pub sigma2: f64,
    pub antennas: Vec<usize>,
    pub receivers: Vec<Receiver>,
    pub lambda_grid: Vec<f64>,
    pub n_trials: u64,
    pub master_seed: u64,
    pub expected_count: u32,
    pub workers: Option<usize>,
    pub normalized: bool,
    pub output: Option<PathBuf>,
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

impl ScenarioConfig {
    /// Resolves a layer, filling anything unset with the reference scenario defaults
    /// (alpha 3.5, beta 3 dB, d_r 10 m, sigma2 -50 dB, L = 1..4, optimum
    /// combining, 10 log-spaced densities from 1e-5 to 1e-2).
    pub fn resolve(layer: ConfigLayer) -> Result<Self> {
        let sigma2 = match (layer.sigma2, layer.sigma2_db) {
            (Some(_), Some(_)) => {
                return Err(Error::config("sigma2", "give either sigma2 or sigma2_db, not both"))
            }
            (Some(lin), None) => lin,
            (None, Some(db)) => db_to_linear(db),
            (None, None) => db_to_linear(-50.0),
        };
        let lambda_grid = match layer.lambda_grid {
            Some(grid) => grid,
            None => log_grid(
                layer.lambda_min.unwrap_or(1e-5),
                layer.lambda_max.unwrap_or(1e-2),
                layer.lambda_points.unwrap_or(10),
            ),
        };
        let receivers = match layer.receivers {
            Some(names) => names
                .iter()
                .map(|s| s.parse())
                .collect::<Result<Vec<Receiver>>>()?,
            None => vec![Receiver::Oc],
        };
        let cfg = ScenarioConfig {
            alpha: layer.alpha.unwrap_or(3.5),
            beta_db: layer.beta_db.unwrap_or(3.0),
            d_r: layer.d_r.unwrap_or(10.0),
            sigma2,
            antennas: layer.antennas.unwrap_or_else(|| vec![1, 2, 3, 4]),
            receivers,
            lambda_grid,
            n_trials: layer.n_trials.unwrap_or(100_000),
            master_seed: layer.master_seed.unwrap_or(20_100_101),
            expected_count: layer.expected_count.unwrap_or(100),
            workers: layer.workers,
            normalized: layer.normalized.unwrap_or(false),
            output: layer.output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::config(field, msg));
        if !(self.alpha.is_finite() && self.alpha > 2.0) {
            return bad("alpha", format!("{} is not > 2", self.alpha));
        }
        if !self.beta_db.is_finite() {
            return bad("beta_db", format!("{} is not finite", self.beta_db));
        }
        if !(self.d_r.is_finite() && self.d_r > 0.0) {
            return bad("d_r", format!("{} is not positive", self.d_r));
        }
        if !(self.sigma2.is_finite() && self.sigma2 >= 0.0) {
            return bad("sigma2", format!("{} is not a nonnegative level", self.sigma2));
        }
        if self.antennas.is_empty() || self.antennas.contains(&0) {
            return bad("antennas", "need a nonempty list of positive counts".into());
        }
        if self.receivers.is_empty() {
            return bad("receivers", "need at least one receiver".into());
        }
        for &l in &self.antennas {
            for r in &self.receivers {
                r.validate(l)?;
            }
        }
        if self.lambda_grid.is_empty() {
            return bad("lambda_grid", "grid is empty".into());
        }
        if let Some(l) = self.lambda_grid.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return bad("lambda_grid", format!("density {l} is not positive"));
        }
        if self.n_trials == 0 {
            return bad("n_trials", "need at least one trial".into());
        }
        if self.expected_count == 0 {
            return bad("expected_count", "need at least one expected node".into());
        }
        if self.workers == Some(0) {
            return bad("workers", "need at least one worker".into());
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        db_to_linear(self.beta_db)
    }

    pub fn params(&self, lambda: f64, antennas: usize) -> Result<SystemParams> {
        SystemParams::new(lambda, self.alpha, self.sigma2, self.d_r, antennas, self.beta())
    }

    /// Applies [`THREADS_ENV`] if set.
    pub fn with_env_workers(mut self) -> Result<Self> {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            let w: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::config(THREADS_ENV, format!("`{v}` is not a worker count")))?;
            if w == 0 {
                return Err(Error::config(THREADS_ENV, "need at least one worker"));
            }
            self.workers = Some(w);
        }
        Ok(self)
    }
}

/// Parameter sets reproducing the four published figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Outage versus density, simulation against closed form, L = 1..4.
    OutageValidation = 1,
    /// OC against MRC, ZF and PZF with L = 3 and no noise.
    ReceiverComparison = 2,
    /// Throughput density versus contention density, L = 1..5.
    Throughput = 3,
    /// Optimum contention density versus L with unit normalization.
    ContentionScaling = 4,
}

impl Figure {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Figure::OutageValidation),
            2 => Ok(Figure::ReceiverComparison),
            3 => Ok(Figure::Throughput),
            4 => Ok(Figure::ContentionScaling),
            _ => Err(Error::config("figure", format!("no preset for figure {n}; use 1-4"))),
        }
    }

    pub fn preset(self) -> ConfigLayer {
        let base = ConfigLayer {
            alpha: Some(3.5),
            beta_db: Some(3.0),
            d_r: Some(10.0),
            expected_count: Some(100),
            ..Default::default()
        };
        match self {
            Figure::OutageValidation => ConfigLayer {
                sigma2_db: Some(-50.0),
                antennas: Some(vec![1, 2, 3, 4]),
                receivers: Some(vec!["oc".into()]),
                lambda_min: Some(1e-5),
                lambda_max: Some(1e-2),
                lambda_points: Some(10),
                n_trials: Some(100_000),
                ..base
            },
            Figure::ReceiverComparison => ConfigLayer {
                sigma2: Some(0.0),
                antennas: Some(vec![3]),
                receivers: Some(vec!["oc".into(), "mrc".into(), "zf".into(), "pzf:1".into()]),
                lambda_min: Some(1e-5),
                lambda_max: Some(1e-2),
                lambda_points: Some(10),
                n_trials: Some(20_000),
                ..base
            },
            Figure::Throughput => ConfigLayer {
                sigma2_db: Some(-57.0),
                antennas: Some(vec![1, 2, 3, 4, 5]),
                lambda_min: Some(1e-5),
                lambda_max: Some(1e-1),
                lambda_points: Some(81),
                ..base
            },
            Figure::ContentionScaling => ConfigLayer {
                sigma2: Some(0.0),
                antennas: Some((1..=8).collect()),
                normalized: Some(true),
                ..base
            },
        }
    }
}

/// A row type that can be written as CSV.
pub trait CsvRow {
    fn header() -> &'static str;
    fn record(&self) -> Vec<String>;
}

/// 17 significant digits, enough for an exact binary64 round trip.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticRow {
    pub lambda: f64,
    pub antennas: usize,
    pub outage: f64,
    pub throughput: f64,
}

impl CsvRow for AnalyticRow {
    fn header() -> &'static str {
        "lambda,L,outage,throughput"
    }
    fn record(&self) -> Vec<String> {
        vec![
            fmt_f64(self.lambda),
            self.antennas.to_string(),
            fmt_f64(self.outage),
            fmt_f64(self.throughput),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationRow {
    pub lambda: f64,
    pub antennas: usize,
    pub receiver: Receiver,
    /// Closed-form optimum combining outage at this point.
    pub analytic_outage: f64,
    pub mc_outage: f64,
    pub stderr: f64,
    pub n_trials: u64,
    pub seed: u64,
}

impl CsvRow for SimulationRow {
    fn header() -> &'static str {
        SIMULATION_HEADER
    }
    fn record(&self) -> Vec<String> {
        vec![
            fmt_f64(self.lambda),
            self.antennas.to_string(),
            self.receiver.to_string(),
            fmt_f64(self.analytic_outage),
            fmt_f64(self.mc_outage),
            fmt_f64(self.stderr),
            self.n_trials.to_string(),
            self.seed.to_string(),
        ]
    }
}

/// How an optimize row was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimizeMode {
    /// Closed-form optimum (noiseless).
    ClosedForm,
    /// Numerical maximization; used when noise is present.
    GridSearch,
}

impl OptimizeMode {
    pub fn label(self) -> &'static str {
        match self {
            OptimizeMode::ClosedForm => "closed_form",
            OptimizeMode::GridSearch => "grid_search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeRow {
    pub antennas: usize,
    /// Normalized optimum `lambda_max * Delta * gamma^(2/alpha)`.
    pub g: f64,
    pub lambda_max: f64,
    pub t_max: f64,
    pub mode: OptimizeMode,
}

impl CsvRow for OptimizeRow {
    fn header() -> &'static str {
        "L,g,lambda_max,t_max,mode"
    }
    fn record(&self) -> Vec<String> {
        vec![
            self.antennas.to_string(),
            fmt_f64(self.g),
            fmt_f64(self.lambda_max),
            fmt_f64(self.t_max),
            self.mode.label().to_string(),
        ]
    }
}

/// Writes `rows` with their header, one newline-terminated line per row.
pub fn write_csv<R: CsvRow, W: Write>(rows: &[R], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(R::header().split(','))?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

/// CSV text of `rows`.
pub fn csv_string<R: CsvRow>(rows: &[R]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Invariant(e.to_string()))
}

/// Closed-form outage and throughput for every `(lambda, L)` pair.
pub fn run_analytic(cfg: &ScenarioConfig) -> Result<Vec<AnalyticRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.antennas.len() * cfg.lambda_grid.len());
    for &l in &cfg.antennas {
        for &lambda in &cfg.lambda_grid {
            let p = cfg.params(lambda, l)?;
            rows.push(AnalyticRow {
                lambda,
                antennas: l,
                outage: outage_cdf(&p)?,
                throughput: throughput_density(&p)?,
            });
        }
    }
    Ok(rows)
}

/// Seed of one grid point: a SplitMix64 mix of the master seed and the
/// point coordinates, so every row can be rerun on its own.
pub fn point_seed(master_seed: u64, antennas: usize, lambda_index: usize) -> u64 {
    let mut z = master_seed
        ^ (antennas as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ (lambda_index as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9).rotate_left(31);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Monte Carlo outage for every `(lambda, L, receiver)` next to the closed
/// form. Receivers at one grid point share trials.
pub fn run_simulation(cfg: &ScenarioConfig) -> Result<Vec<SimulationRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &l in &cfg.antennas {
        for (i, &lambda) in cfg.lambda_grid.iter().enumerate() {
            let p = cfg.params(lambda, l)?;
            let seed = point_seed(cfg.master_seed, l, i);
            let mc = McConfig {
                n_trials: cfg.n_trials,
                master_seed: seed,
                expected_count: cfg.expected_count,
                workers: cfg.workers,
            };
            let analytic = outage_cdf(&p)?;
            let estimates = estimate_outage_multi(&p, &cfg.receivers, &mc)?;
            for (&receiver, e) in cfg.receivers.iter().zip(estimates) {
                rows.push(SimulationRow {
                    lambda,
                    antennas: l,
                    receiver,
                    analytic_outage: analytic,
                    mc_outage: e.p_hat,
                    stderr: e.stderr,
                    n_trials: e.n_trials,
                    seed,
                });
            }
        }
    }
    Ok(rows)
}

/// Optimum contention density per array size. Noiseless scenarios (or
/// `normalized`) use the closed form; with noise the throughput is
/// maximized numerically and the row is labelled accordingly.
pub fn run_optimize(cfg: &ScenarioConfig) -> Result<Vec<OptimizeRow>> {
    cfg.validate()?;
    let gamma = cfg.beta() * cfg.d_r.powf(cfg.alpha);
    let scale = if cfg.normalized {
        1.0
    } else {
        contention_scale(cfg.alpha, gamma)?
    };
    let mut rows = Vec::with_capacity(cfg.antennas.len());
    for &l in &cfg.antennas {
        let closed = ContentionOptimum::from_scale(l, scale)?;
        if cfg.normalized || cfg.sigma2 == 0.0 {
            rows.push(OptimizeRow {
                antennas: l,
                g: closed.g,
                lambda_max: closed.lambda_max,
                t_max: closed.t_max,
                mode: OptimizeMode::ClosedForm,
            });
        } else {
            let p = cfg.params(closed.lambda_max, l)?;
            let n = numerical_optimum(&p, closed.lambda_max * 1e-4, closed.lambda_max * 10.0, 500)?;
            rows.push(OptimizeRow {
                antennas: l,
                g: n.lambda_max * scale,
                lambda_max: n.lambda_max,
                t_max: n.t_max,
                mode: OptimizeMode::GridSearch,
            });
        }
    }
    Ok(rows)
}

/// Rendered output of one command.
#[derive(Debug, Clone, PartialEq)]
pub enum Report {
    Analytic(Vec<AnalyticRow>),
    Simulation(Vec<SimulationRow>),
    Optimize(Vec<OptimizeRow>),
}

impl Report {
    pub fn len(&self) -> usize {
        match self {
            Report::Analytic(r) => r.len(),
            Report::Simulation(r) => r.len(),
            Report::Optimize(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_csv(&self) -> Result<String> {
        match self {
            Report::Analytic(r) => csv_string(r),
            Report::Simulation(r) => csv_string(r),
            Report::Optimize(r) => csv_string(r),
        }
    }
}

/// Runs the experiment a figure preset stands for.
pub fn run_figure(figure: Figure, cfg: &ScenarioConfig) -> Result<Report> {
    Ok(match figure {
        Figure::OutageValidation | Figure::ReceiverComparison => {
            Report::Simulation(run_simulation(cfg)?)
        }
        Figure::Throughput => Report::Analytic(run_analytic(cfg)?),
        Figure::ContentionScaling => Report::Optimize(run_optimize(cfg)?),
    })
}

/// `Delta gamma^(2/alpha)` of a scenario, for normalizing densities.
pub fn density_scale(cfg: &ScenarioConfig) -> Result<f64> {
    let gamma = cfg.beta() * cfg.d_r.powf(cfg.alpha);
    Ok(delta_const(cfg.alpha)?.value() * gamma.powf(2.0 / cfg.alpha))
}
