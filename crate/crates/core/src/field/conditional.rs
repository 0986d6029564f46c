//! Outage conditioned on a fixed set of interferer positions, averaged over
//! fading only.
//!
//! Given received powers `P_j` the optimum combining SINR satisfies
//!
//! ```text
//! P(SINR < beta | P) = 1 - sum_{i<L} a_i gamma^i / (exp(sigma2 gamma) prod_j (1 + P_j gamma))
//! ```
//!
//! where `a_i` are the first `L` Taylor coefficients of
//! `exp(sigma2 gamma) prod_j (1 + P_j gamma)`, i.e.
//! `a_i = sum_{k<=i} sigma2^(i-k)/(i-k)! b_k` with `b_k` the elementary
//! symmetric polynomials of the powers.

use super::monte_carlo::{run_trials, McConfig};
use super::{draw_channels, oc_sinr, trial_rng, NetworkRealization, OutageEstimate};
use crate::analytic::{check_antennas, check_nonneg, SystemParams};
use crate::error::{Error, Result};

/// `|X_j|^-alpha` for every node of the realization.
pub fn received_powers(net: &NetworkRealization, alpha: f64) -> Vec<f64> {
    net.positions
        .iter()
        .map(|p| (p[0] * p[0] + p[1] * p[1]).powf(-alpha / 2.0))
        .collect()
}

/// Conditional outage of optimum combining for fixed received powers.
///
/// The elementary symmetric polynomials of `p_j = P_j gamma` are built by the
/// usual incremental product `b_k <- b_k + p_j b_(k-1)`, with each step
/// divided by `1 + p_j`. That keeps every running value in `[0, 1]` (it is
/// the distribution of a sum of Bernoulli(`p_j / (1 + p_j)`) variables), so
/// the ratio to `prod_j (1 + p_j)` never overflows however large `N` or the
/// powers get.
pub fn conditional_outage_cdf(
    powers: &[f64],
    sigma2: f64,
    antennas: usize,
    gamma: f64,
) -> Result<f64> {
    check_antennas(antennas)?;
    check_nonneg("sigma2", sigma2)?;
    check_nonneg("gamma", gamma)?;
    if let Some(&bad) = powers.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::domain("P_j", bad, "received powers must be finite and positive"));
    }
    // scaled[k] = b_k(p) / prod_j (1 + p_j), truncated at k < L
    let mut scaled = vec![0.0; antennas];
    scaled[0] = 1.0;
    for &p in powers {
        let p = p * gamma;
        let norm = 1.0 / (1.0 + p);
        for k in (1..antennas).rev() {
            scaled[k] = (scaled[k] + p * scaled[k - 1]) * norm;
        }
        scaled[0] *= norm;
    }
    // (sigma2 gamma)^j / j! * exp(-sigma2 gamma)
    let noise = sigma2 * gamma;
    let mut noise_terms = vec![0.0; antennas];
    let mut t = (-noise).exp();
    for (j, slot) in noise_terms.iter_mut().enumerate() {
        *slot = t;
        t *= noise / (j + 1) as f64;
    }
    let mut success = 0.0;
    for i in 0..antennas {
        for k in 0..=i {
            success += noise_terms[i - k] * scaled[k];
        }
    }
    Ok((1.0 - success).clamp(0.0, 1.0))
}

/// Fading-only Monte Carlo: positions stay fixed, fresh Rayleigh channels
/// are drawn for every trial, and optimum combining outage is counted.
pub fn estimate_conditional_outage(
    net: &NetworkRealization,
    params: &SystemParams,
    cfg: &McConfig,
) -> Result<OutageEstimate> {
    params.validate()?;
    cfg.validate()?;
    let outcomes = run_trials(cfg, |trial| {
        let mut rng = trial_rng(cfg.master_seed, trial);
        let ch = draw_channels(params.antennas, net.node_count(), &mut rng);
        oc_sinr(net, &ch, params) < params.beta
    })?;
    let outages = outcomes.iter().filter(|&&o| o).count() as u64;
    Ok(OutageEstimate::from_count(outages, cfg.n_trials, cfg.master_seed))
}
