//! Closed-form outage of the optimum combining (MMSE) receiver in a Poisson
//! field of Rayleigh-faded interferers.
//!
//! With `gamma = beta * d_r^alpha` and `x = lambda * Delta * gamma^(2/alpha) + sigma2 * gamma`
//! the outage probability is
//!
//! ```text
//! F = 1 - sum_{i=0}^{L-1} x^i / i! * exp(-x)
//! ```
//!
//! i.e. the probability that a Poisson variable of mean `x` is at least `L`.
//! The noise-limited and interference-limited regimes, the SIR moments and the
//! spatial throughput all follow from this expression.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{Error, Result};

/// Full parameter tuple of one scenario. Powers are linear and transmit power
/// is normalized to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Density of simultaneously transmitting interferers (nodes per m²).
    pub lambda: f64,
    /// Path-loss exponent, strictly greater than 2.
    pub alpha: f64,
    /// Noise level: the scalar in `R = R_I + sigma2 * I`.
    pub sigma2: f64,
    /// Desired-link distance (m).
    pub d_r: f64,
    /// Number of receive antennas.
    pub antennas: usize,
    /// Linear SINR threshold.
    pub beta: f64,
}

impl SystemParams {
    pub fn new(
        lambda: f64,
        alpha: f64,
        sigma2: f64,
        d_r: f64,
        antennas: usize,
        beta: f64,
    ) -> Result<Self> {
        let p = SystemParams {
            lambda,
            alpha,
            sigma2,
            d_r,
            antennas,
            beta,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        check_nonneg("lambda", self.lambda)?;
        check_nonneg("sigma2", self.sigma2)?;
        check_pos("d_r", self.d_r)?;
        check_antennas(self.antennas)?;
        check_pos("beta", self.beta)?;
        Ok(())
    }

    /// Normalized threshold `beta * d_r^alpha`.
    pub fn gamma(&self) -> f64 {
        self.beta * self.d_r.powf(self.alpha)
    }

    /// Mean number of "effective" interferers, `lambda * Delta * gamma^(2/alpha)`.
    pub fn interference_load(&self) -> Result<f64> {
        interference_load(self.lambda, self.alpha, self.gamma())
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_antennas(mut self, antennas: usize) -> Self {
        self.antennas = antennas;
        self
    }
}

/// Geometry constant `Delta = pi (2/alpha) Gamma(2/alpha) Gamma(1 - 2/alpha)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DeltaConst(f64);

impl DeltaConst {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 2.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "path-loss exponent must exceed 2"))
    }
}

pub(crate) fn check_pos(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, v, "must be finite and positive"))
    }
}

pub(crate) fn check_nonneg(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, v, "must be finite and nonnegative"))
    }
}

pub(crate) fn check_antennas(l: usize) -> Result<()> {
    if l >= 1 {
        Ok(())
    } else {
        Err(Error::domain("antennas", l as f64, "need at least one antenna"))
    }
}

/// Converts a decibel value to linear scale, `10^(db/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Normalized threshold `gamma = beta * d_r^alpha`.
pub fn gamma_from_beta(beta: f64, d_r: f64, alpha: f64) -> Result<f64> {
    check_pos("beta", beta)?;
    check_pos("d_r", d_r)?;
    check_alpha(alpha)?;
    Ok(beta * d_r.powf(alpha))
}

/// Evaluated through the reflection formula
/// `Gamma(z) Gamma(1 - z) = pi / sin(pi z)` with `z = 2/alpha`, giving
/// `Delta = 2 pi^2 / (alpha sin(2 pi / alpha))`.
pub fn delta_const(alpha: f64) -> Result<DeltaConst> {
    check_alpha(alpha)?;
    let s = (2.0 * PI / alpha).sin();
    let v = 2.0 * PI * PI / (alpha * s);
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::domain("alpha", alpha, "Delta diverges as alpha -> 2"));
    }
    Ok(DeltaConst(v))
}

/// `lambda * Delta * gamma^(2/alpha)`.
pub fn interference_load(lambda: f64, alpha: f64, gamma: f64) -> Result<f64> {
    check_nonneg("lambda", lambda)?;
    check_nonneg("gamma", gamma)?;
    let delta = delta_const(alpha)?.value();
    Ok(lambda * delta * gamma.powf(2.0 / alpha))
}

/// `sum_{i<n} x^i/i! * exp(-x)`, the probability that a Poisson variable of
/// mean `x` is below `n`. Terms follow `t_{i+1} = t_i * x / (i+1)` from
/// `t_0 = exp(-x)`, with `x^0 = 1` also at `x = 0`.
pub(crate) fn poisson_head(n: usize, x: f64) -> f64 {
    if x > UNDERFLOW_GUARD {
        // exp(-x) underflows; sum downward from the last term instead
        let mut term = log_pmf(n - 1, x).exp();
        let mut sum = 0.0;
        for i in (0..n).rev() {
            sum += term;
            if term < sum * 1e-18 {
                break;
            }
            term *= i as f64 / x;
        }
        return sum.min(1.0);
    }
    let mut term = (-x).exp();
    let mut sum = 0.0;
    for i in 0..n {
        sum += term;
        term *= x / (i + 1) as f64;
    }
    sum.min(1.0)
}

/// `sum_{i>=n} x^i/i! * exp(-x)`, summed directly. Meant for `x < n`, where
/// the terms fall off geometrically and `1 - head` would cancel.
fn poisson_tail(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut term = if x > UNDERFLOW_GUARD {
        log_pmf(n, x).exp()
    } else {
        (1..=n).fold((-x).exp(), |t, i| t * x / i as f64)
    };
    let mut sum = 0.0;
    let mut i = n;
    while term > sum * 1e-18 {
        sum += term;
        i += 1;
        term *= x / i as f64;
    }
    sum
}

/// Loads above this use logarithms because `exp(-x)` would underflow.
const UNDERFLOW_GUARD: f64 = 700.0;

fn log_pmf(i: usize, x: f64) -> f64 {
    i as f64 * x.ln() - x - ln_gamma(i as f64 + 1.0)
}

/// Outage from the total Poisson mean `x`: the upper tail is summed directly
/// below the mean so that small outages keep their relative accuracy.
fn outage_from_load(antennas: usize, x: f64) -> f64 {
    let f = if x < antennas as f64 {
        poisson_tail(antennas, x)
    } else {
        1.0 - poisson_head(antennas, x)
    };
    f.clamp(0.0, 1.0)
}

/// Outage probability of optimum combining in a Poisson field with noise.
pub fn outage_cdf(params: &SystemParams) -> Result<f64> {
    params.validate()?;
    let gamma = params.gamma();
    let x = interference_load(params.lambda, params.alpha, gamma)? + params.sigma2 * gamma;
    Ok(outage_from_load(params.antennas, x))
}

/// Noise-only outage: the chi-square CDF of maximal ratio combining in white
/// Gaussian noise.
pub fn outage_noise_limited(antennas: usize, sigma2: f64, gamma: f64) -> Result<f64> {
    check_antennas(antennas)?;
    check_nonneg("sigma2", sigma2)?;
    check_nonneg("gamma", gamma)?;
    Ok(outage_from_load(antennas, sigma2 * gamma))
}

/// Interference-only outage. Equals the probability that at least `L`
/// nodes of the field fall within radius `sqrt(Delta/pi) gamma^(1/alpha)`.
pub fn outage_interference_limited(
    antennas: usize,
    lambda: f64,
    alpha: f64,
    gamma: f64,
) -> Result<f64> {
    check_antennas(antennas)?;
    let x = interference_load(lambda, alpha, gamma)?;
    Ok(outage_from_load(antennas, x))
}

/// `Gamma(L + alpha/2) / (L-1)!`, the mean-SIR gain of an `L`-element array.
pub fn array_gain(antennas: usize, alpha: f64) -> Result<f64> {
    check_antennas(antennas)?;
    check_alpha(alpha)?;
    Ok(gamma_ratio(antennas as f64 + alpha / 2.0, antennas as f64))
}

/// `Gamma(a) / Gamma(b)`, switching to logarithms before either overflows.
fn gamma_ratio(a: f64, b: f64) -> f64 {
    if a.max(b) < 170.0 {
        gamma(a) / gamma(b)
    } else {
        (ln_gamma(a) - ln_gamma(b)).exp()
    }
}

fn moment_scale(antennas: usize, alpha: f64, lambda: f64, d_r: f64) -> Result<f64> {
    check_antennas(antennas)?;
    check_pos("lambda", lambda)?;
    check_pos("d_r", d_r)?;
    let delta = delta_const(alpha)?.value();
    Ok(d_r.powf(-alpha) / (lambda * delta).powf(alpha / 2.0))
}

/// Mean SIR in the interference-limited regime.
pub fn sir_mean(antennas: usize, alpha: f64, lambda: f64, d_r: f64) -> Result<f64> {
    let scale = moment_scale(antennas, alpha, lambda, d_r)?;
    Ok(array_gain(antennas, alpha)? * scale)
}

/// SIR variance in the interference-limited regime.
pub fn sir_variance(antennas: usize, alpha: f64, lambda: f64, d_r: f64) -> Result<f64> {
    let scale = moment_scale(antennas, alpha, lambda, d_r)?;
    let l = antennas as f64;
    let second = gamma_ratio(l + alpha, l);
    let first = gamma_ratio(l + alpha / 2.0, l);
    Ok((second - first * first) * scale * scale)
}

/// Successful transmissions per unit area, `lambda (1 - F)`.
pub fn throughput_density(params: &SystemParams) -> Result<f64> {
    Ok(params.lambda * (1.0 - outage_cdf(params)?))
}
