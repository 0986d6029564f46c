//! Optimum ALOHA contention density for the optimum combining receiver.
//!
//! In the interference-limited regime the spatial throughput
//! `T(lambda) = lambda (1 - F(gamma, lambda))` is maximized at
//! `lambda_max = g(L) / (Delta gamma^(2/alpha))`, where `g(L)` is the unique
//! positive root of
//!
//! ```text
//! Q(t) = sum_{i=0}^{L-1} t^i / i!  -  t^L / (L-1)!
//! ```
//!
//! The root always lies in `[L/2, L]`, so a plain bisection on that bracket is
//! enough; no general polynomial solver is involved.

use statrs::function::gamma::ln_gamma;

use crate::analytic::{
    check_alpha, check_antennas, check_nonneg, delta_const, outage_cdf, SystemParams,
};
use crate::error::{Error, Result};

const BISECTION_RTOL: f64 = 1e-12;

/// Location and value of the throughput maximum for one array size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContentionOptimum {
    pub antennas: usize,
    /// Positive root of `Q`; equals `lambda_max` when `Delta gamma^(2/alpha) = 1`.
    pub g: f64,
    pub lambda_max: f64,
    pub t_max: f64,
}

impl ContentionOptimum {
    /// Optimum for an arbitrary scale `Delta * gamma^(2/alpha)`.
    pub fn from_scale(antennas: usize, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::domain(
                "Delta*gamma^(2/alpha)",
                scale,
                "must be finite and positive",
            ));
        }
        let g = g_of_l(antennas)?;
        Ok(ContentionOptimum {
            antennas,
            g,
            lambda_max: g / scale,
            t_max: t_max_normalized(antennas, g) / scale,
        })
    }

    pub fn new(antennas: usize, alpha: f64, gamma: f64) -> Result<Self> {
        Self::from_scale(antennas, contention_scale(alpha, gamma)?)
    }
}

/// `Delta * gamma^(2/alpha)`; rejects `gamma = 0`, where no optimum exists.
pub fn contention_scale(alpha: f64, gamma: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::domain("gamma", gamma, "must be finite and positive"));
    }
    Ok(delta_const(alpha)?.value() * gamma.powf(2.0 / alpha))
}

/// `t^L / L! * exp(-t)` together with `sum_{i<L} t^i/i! * exp(-t)`.
fn scaled_terms(antennas: usize, t: f64) -> (f64, f64) {
    let mut term = (-t).exp();
    let mut head = 0.0;
    for i in 0..antennas {
        head += term;
        term *= t / (i + 1) as f64;
    }
    (head, term)
}

/// The polynomial `Q(t)` itself. Its terms grow like `e^t`, so for large `L`
/// the cancellation near the root leaves an absolute error of order
/// `e^t * eps`; root finding uses [`q_poly_scaled`] instead.
pub fn q_poly(antennas: usize, t: f64) -> Result<f64> {
    check_antennas(antennas)?;
    check_nonneg("t", t)?;
    let mut term = 1.0;
    let mut head = 0.0;
    for i in 0..antennas {
        head += term;
        term *= t / (i + 1) as f64;
    }
    Ok(head - antennas as f64 * term)
}

/// `exp(-t) Q(t)`: same sign and roots as `Q`, bounded by one in magnitude.
pub fn q_poly_scaled(antennas: usize, t: f64) -> Result<f64> {
    check_antennas(antennas)?;
    check_nonneg("t", t)?;
    let (head, last) = scaled_terms(antennas, t);
    Ok(head - antennas as f64 * last)
}

/// Derivative of `exp(-t) Q(t)`: `t^(L-1)/(L-1)! e^-t (t - L - 1)`.
fn q_scaled_derivative(antennas: usize, t: f64) -> f64 {
    let l = antennas as f64;
    let ln_pmf = (l - 1.0) * t.ln() - t - ln_gamma(l);
    let pmf = if antennas == 1 { (-t).exp() } else { ln_pmf.exp() };
    pmf * (t - l - 1.0)
}

/// Unique positive root of `Q`, found by bisection on `[L/2, L]` followed by
/// one safeguarded Newton step.
pub fn g_of_l(antennas: usize) -> Result<f64> {
    check_antennas(antennas)?;
    let mut lo = antennas as f64 / 2.0;
    let mut hi = antennas as f64;
    let f_lo = q_poly_scaled(antennas, lo)?;
    let f_hi = q_poly_scaled(antennas, hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::Invariant(format!(
            "Q does not change sign on [L/2, L] for L = {antennas}: Q(L/2) = {f_lo:e}, Q(L) = {f_hi:e}"
        )));
    }
    while hi - lo > BISECTION_RTOL * lo {
        let mid = 0.5 * (lo + hi);
        let f = q_poly_scaled(antennas, mid)?;
        if f == 0.0 {
            return Ok(mid);
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let f = q_poly_scaled(antennas, mid)?;
    let df = q_scaled_derivative(antennas, mid);
    let polished = mid - f / df;
    if df != 0.0 && polished.is_finite() && polished >= lo && polished <= hi {
        Ok(polished)
    } else {
        Ok(mid)
    }
}

/// `g^(L+1) e^(-g) / (L-1)!`, the maximum throughput at unit scale.
fn t_max_normalized(antennas: usize, g: f64) -> f64 {
    if g < 700.0 {
        // g^2 times the Poisson(g) pmf at L - 1, built up from e^-g
        let pmf = (1..antennas).fold((-g).exp(), |acc, i| acc * g / i as f64);
        g * g * pmf
    } else {
        let l = antennas as f64;
        ((l + 1.0) * g.ln() - g - ln_gamma(l)).exp()
    }
}

/// Optimum contention density `g(L) / (Delta gamma^(2/alpha))`.
pub fn lambda_max(antennas: usize, alpha: f64, gamma: f64) -> Result<f64> {
    Ok(ContentionOptimum::new(antennas, alpha, gamma)?.lambda_max)
}

/// Maximum spatial throughput `g^(L+1) / ((L-1)! Delta gamma^(2/alpha)) e^(-g)`.
pub fn throughput_max(antennas: usize, alpha: f64, gamma: f64) -> Result<f64> {
    Ok(ContentionOptimum::new(antennas, alpha, gamma)?.t_max)
}

/// Result of the numerical throughput maximization used when noise is
/// present and no closed form exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericalOptimum {
    pub lambda_max: f64,
    pub t_max: f64,
}

/// Maximizes `lambda (1 - F)` over `lambda` for the given scenario (its own
/// `lambda` is ignored). A log-spaced scan over `[lambda_lo, lambda_hi]`
/// locates the peak, which golden-section search then refines. This is a
/// numerical extension for `sigma2 > 0`; with `sigma2 = 0` it reproduces
/// [`ContentionOptimum`].
pub fn numerical_optimum(
    params: &SystemParams,
    lambda_lo: f64,
    lambda_hi: f64,
    points: usize,
) -> Result<NumericalOptimum> {
    if !(lambda_lo > 0.0 && lambda_hi > lambda_lo && lambda_hi.is_finite()) {
        return Err(Error::domain(
            "lambda range",
            lambda_lo,
            "need 0 < lambda_lo < lambda_hi < inf",
        ));
    }
    if points < 3 {
        return Err(Error::domain("points", points as f64, "need at least 3 grid points"));
    }
    let throughput = |lambda: f64| -> Result<f64> {
        let p = params.with_lambda(lambda);
        Ok(lambda * (1.0 - outage_cdf(&p)?))
    };
    let (llo, lhi) = (lambda_lo.ln(), lambda_hi.ln());
    let step = (lhi - llo) / (points - 1) as f64;
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..points {
        let t = throughput((llo + step * i as f64).exp())?;
        if t > best.1 {
            best = (i, t);
        }
    }
    // golden-section in log(lambda) over the neighbouring grid cells
    let mut a = llo + step * best.0.saturating_sub(1) as f64;
    let mut b = llo + step * (best.0 + 1).min(points - 1) as f64;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = throughput(c.exp())?;
    let mut fd = throughput(d.exp())?;
    while (b - a).abs() > 1e-13 * a.abs().max(1.0) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = throughput(c.exp())?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = throughput(d.exp())?;
        }
    }
    let lambda = (0.5 * (a + b)).exp();
    let t = throughput(lambda)?;
    if t >= best.1 {
        Ok(NumericalOptimum {
            lambda_max: lambda,
            t_max: t,
        })
    } else {
        let lambda = (llo + step * best.0 as f64).exp();
        Ok(NumericalOptimum {
            lambda_max: lambda,
            t_max: best.1,
        })
    }
}
