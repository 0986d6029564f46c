//! Monte Carlo simulator of the physical model: a Poisson field of
//! single-antenna interferers around a receiver with `L` antennas at the
//! origin, Rayleigh fading on every link, and the SINR achieved by optimum
//! combining and by simpler linear combiners.
//!
//! Noise enters only through `sigma2 * I` in the covariance; the noise vector
//! itself is never sampled since the SINR depends on it only through its
//! covariance.

mod conditional;
mod monte_carlo;
mod receivers;
mod sampling;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::ComplexVector;

pub use conditional::{conditional_outage_cdf, estimate_conditional_outage, received_powers};
pub use monte_carlo::{
    estimate_kth_nearest_within, estimate_outage, estimate_outage_multi, estimate_sir_moments,
    simulate_trial, McConfig, SirMoments,
};
pub use receivers::{
    build_covariance, combiner_sinr, interferers_by_strength, oc_sinr, oc_weight, receiver_sinr,
    receiver_weight,
};
pub use sampling::{disk_radius, draw_channels, sample_ppp, trial_rng, TrialRng};

/// One sampled interferer field inside a disk centred on the receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization {
    pub positions: Vec<[f64; 2]>,
    pub disk_radius: f64,
}

impl NetworkRealization {
    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    /// Distance of node `k` from the receiver.
    pub fn distance(&self, k: usize) -> f64 {
        let [x, y] = self.positions[k];
        x.hypot(y)
    }
}

/// Propagation vectors for one trial: the desired link and one vector per
/// interferer, each with i.i.d. CN(0, 1) entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDraw {
    pub desired: ComplexVector,
    pub interferers: Vec<ComplexVector>,
}

/// Linear combining strategy at the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Receiver {
    /// Optimum combining, `w = R^-1 c_r` (the MMSE receiver).
    Oc,
    /// Maximal ratio combining, `w = c_r`.
    Mrc,
    /// Zero forcing against the `L - 1` strongest interferers.
    Zf,
    /// Partial zero forcing against the `k` strongest interferers.
    Pzf(usize),
}

impl Receiver {
    /// Default partial-zero-forcing depth, `ceil(L/2)`.
    pub fn default_pzf(antennas: usize) -> Receiver {
        Receiver::Pzf(antennas.div_ceil(2))
    }

    pub fn validate(self, antennas: usize) -> Result<()> {
        match self {
            Receiver::Pzf(k) if k + 1 > antennas => Err(Error::config(
                "receivers",
                format!("PZF({k}) cancels more than L - 1 = {} interferers", antennas.saturating_sub(1)),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Receiver::Oc => f.write_str("OC"),
            Receiver::Mrc => f.write_str("MRC"),
            Receiver::Zf => f.write_str("ZF"),
            Receiver::Pzf(k) => write!(f, "PZF({k})"),
        }
    }
}

impl FromStr for Receiver {
    type Err = Error;

    /// Accepts `oc`, `mrc`, `zf`, `pzf:k` and `pzf(k)`, case-insensitively.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "oc" | "mmse" => return Ok(Receiver::Oc),
            "mrc" => return Ok(Receiver::Mrc),
            "zf" => return Ok(Receiver::Zf),
            _ => {}
        }
        let k = lower
            .strip_prefix("pzf:")
            .or_else(|| lower.strip_prefix("pzf(").and_then(|r| r.strip_suffix(')')));
        match k.map(str::parse::<usize>) {
            Some(Ok(k)) => Ok(Receiver::Pzf(k)),
            _ => Err(Error::config("receivers", format!("unknown receiver `{s}`"))),
        }
    }
}

/// Post-combining SINR of one receiver in one trial. `value` is
/// `f64::INFINITY` when the receiver can null all interference in a
/// noiseless field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinrSample {
    pub receiver: Receiver,
    pub value: f64,
    pub trial_index: u64,
}

/// Monte Carlo outage estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageEstimate {
    pub p_hat: f64,
    /// `sqrt(p_hat (1 - p_hat) / n_trials)`
    pub stderr: f64,
    pub n_trials: u64,
    pub master_seed: u64,
}

impl OutageEstimate {
    pub fn from_count(outages: u64, n_trials: u64, master_seed: u64) -> Self {
        let p_hat = outages as f64 / n_trials as f64;
        OutageEstimate {
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / n_trials as f64).sqrt(),
            n_trials,
            master_seed,
        }
    }

    /// Whether `reference` lies within `k` standard errors of the estimate.
    pub fn agrees_with(&self, reference: f64, k: f64) -> bool {
        (self.p_hat - reference).abs() <= k * self.stderr
    }
}
