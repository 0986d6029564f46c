use log::warn;
use rayon::prelude::*;

use super::{
    draw_channels, receiver_sinr, sample_ppp, trial_rng, OutageEstimate, Receiver, SinrSample,
};
use crate::analytic::SystemParams;
use crate::error::{Error, Result};

/// Trial budget and reproducibility settings of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub n_trials: u64,
    pub master_seed: u64,
    /// Mean number of interferers in the simulation disk.
    pub expected_count: u32,
    /// Worker threads; `None` uses the rayon default. Results do not depend
    /// on this value.
    pub workers: Option<usize>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            n_trials: 100_000,
            master_seed: 0x5eed,
            expected_count: 100,
            workers: None,
        }
    }
}

impl McConfig {
    pub fn new(n_trials: u64, master_seed: u64) -> Self {
        McConfig {
            n_trials,
            master_seed,
            ..Default::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn with_expected_count(mut self, expected_count: u32) -> Self {
        self.expected_count = expected_count;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::config("n_trials", "need at least one trial"));
        }
        if self.expected_count == 0 {
            return Err(Error::config("expected_count", "need at least one expected node"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "need at least one worker"));
        }
        Ok(())
    }
}

/// Runs `trial(i)` for every `i < n_trials` and returns the results in trial
/// order, whatever the worker count.
pub(crate) fn run_trials<T, F>(cfg: &McConfig, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    match cfg.workers {
        Some(1) => Ok((0..cfg.n_trials).map(trial).collect()),
        workers => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(w) = workers {
                builder = builder.num_threads(w);
            }
            let pool = builder
                .build()
                .map_err(|e| Error::Invariant(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(|| (0..cfg.n_trials).into_par_iter().map(&trial).collect()))
        }
    }
}

/// One trial: a fresh field and fresh channels, evaluated for every receiver
/// on the same draw.
pub fn simulate_trial(
    params: &SystemParams,
    receivers: &[Receiver],
    expected_count: u32,
    master_seed: u64,
    trial_index: u64,
) -> Vec<SinrSample> {
    let mut rng = trial_rng(master_seed, trial_index);
    let net = sample_ppp(params.lambda, expected_count, &mut rng);
    let ch = draw_channels(params.antennas, net.node_count(), &mut rng);
    receivers
        .iter()
        .map(|&receiver| SinrSample {
            receiver,
            value: receiver_sinr(receiver, &net, &ch, params),
            trial_index,
        })
        .collect()
}

fn check_sim_inputs(params: &SystemParams, receivers: &[Receiver], cfg: &McConfig) -> Result<()> {
    params.validate()?;
    cfg.validate()?;
    if !(params.lambda > 0.0) {
        return Err(Error::domain("lambda", params.lambda, "simulation needs a positive density"));
    }
    if receivers.is_empty() || receivers.len() > 64 {
        return Err(Error::config("receivers", "need between 1 and 64 receivers"));
    }
    for r in receivers {
        r.validate(params.antennas)?;
    }
    Ok(())
}

/// Outage estimates for several receivers sharing the same trials, which
/// makes their differences paired comparisons.
pub fn estimate_outage_multi(
    params: &SystemParams,
    receivers: &[Receiver],
    cfg: &McConfig,
) -> Result<Vec<OutageEstimate>> {
    check_sim_inputs(params, receivers, cfg)?;
    let masks = run_trials(cfg, |trial| {
        simulate_trial(params, receivers, cfg.expected_count, cfg.master_seed, trial)
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, s)| if s.value < params.beta { m | 1 << i } else { m })
    })?;
    Ok((0..receivers.len())
        .map(|i| {
            let count = masks.iter().filter(|&&m| m & (1 << i) != 0).count() as u64;
            OutageEstimate::from_count(count, cfg.n_trials, cfg.master_seed)
        })
        .collect())
}

/// Fraction of trials whose SINR falls below `params.beta`.
pub fn estimate_outage(
    params: &SystemParams,
    receiver: Receiver,
    cfg: &McConfig,
) -> Result<OutageEstimate> {
    Ok(estimate_outage_multi(params, &[receiver], cfg)?[0])
}

/// Sample moments of the SIR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirMoments {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub n_finite: u64,
    /// Trials with infinite SIR, excluded from the moments.
    pub n_infinite: u64,
}

/// Mean and variance of the SIR over `cfg.n_trials` noiseless trials.
pub fn estimate_sir_moments(
    params: &SystemParams,
    receiver: Receiver,
    cfg: &McConfig,
) -> Result<SirMoments> {
    check_sim_inputs(params, &[receiver], cfg)?;
    if params.sigma2 != 0.0 {
        return Err(Error::domain("sigma2", params.sigma2, "SIR moments need sigma2 = 0"));
    }
    let values = run_trials(cfg, |trial| {
        simulate_trial(params, &[receiver], cfg.expected_count, cfg.master_seed, trial)[0].value
    })?;
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    let n_infinite = (values.len() - finite.len()) as u64;
    if n_infinite > 0 {
        warn!("excluded {n_infinite} trials with infinite SIR from the moments");
    }
    let n = finite.len() as f64;
    let mean = finite.iter().sum::<f64>() / n;
    let variance = finite.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok(SirMoments {
        mean,
        variance,
        n_finite: finite.len() as u64,
        n_infinite,
    })
}

/// Estimates the probability that at least `k` nodes of a field of density
/// `lambda` lie within `radius` of the origin, i.e. that the `k`-th nearest
/// node is closer than `radius`.
pub fn estimate_kth_nearest_within(
    lambda: f64,
    k: usize,
    radius: f64,
    cfg: &McConfig,
) -> Result<OutageEstimate> {
    cfg.validate()?;
    if !(lambda > 0.0) {
        return Err(Error::domain("lambda", lambda, "need a positive density"));
    }
    let disk = super::disk_radius(lambda, cfg.expected_count);
    if !(radius > 0.0 && radius <= disk) {
        return Err(Error::domain("radius", radius, "must lie inside the simulation disk"));
    }
    let r2 = radius * radius;
    let hits = run_trials(cfg, |trial| {
        let mut rng = trial_rng(cfg.master_seed, trial);
        let net = sample_ppp(lambda, cfg.expected_count, &mut rng);
        net.positions
            .iter()
            .filter(|p| p[0] * p[0] + p[1] * p[1] < r2)
            .count()
            >= k
    })?;
    let count = hits.iter().filter(|&&h| h).count() as u64;
    Ok(OutageEstimate::from_count(count, cfg.n_trials, cfg.master_seed))
}
