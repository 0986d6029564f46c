//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's numerics.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Tanh-sinh quadrature of `f` over `[a, b]`. `f` receives the abscissa and
/// its distances to both ends, so endpoint singularities stay accurate.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let h = 1.0 / 128.0;
    let mut sum = f(mid, half, half) * PI / 2.0;
    for k in 1.. {
        let t = k as f64 * h;
        let u = PI / 2.0 * t.sinh();
        let w = PI / 2.0 * t.cosh() / (u.cosh() * u.cosh());
        if w < 1e-300 {
            break;
        }
        // distance of tanh(u) from 1, computed without cancellation
        let e = (-2.0 * u).exp();
        let gap = half * 2.0 * e / (1.0 + e);
        if gap == 0.0 {
            break;
        }
        let lo = a + gap;
        let hi = b - gap;
        sum += w * (f(lo, gap, b - lo) + f(hi, hi - a, gap));
    }
    sum * h * half
}

/// `int_0^inf f(x) dx` through `x = t / (1 - t)`.
pub fn half_line<F: Fn(f64) -> f64>(f: F) -> f64 {
    tanh_sinh(
        |t, _, one_minus_t| {
            let x = t / one_minus_t;
            let v = f(x) / (one_minus_t * one_minus_t);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
    )
}

/// `Delta` as the plane integral `2 pi int_0^inf r / (1 + r^alpha) dr`.
pub fn delta_by_quadrature(alpha: f64) -> f64 {
    2.0 * PI * half_line(|r| r / (1.0 + r.powf(alpha)))
}

/// Interference load of a field truncated to radius `radius`:
/// `lambda 2 pi int_0^R r gamma / (r^alpha + gamma) dr`.
pub fn truncated_load(lambda: f64, alpha: f64, gamma: f64, radius: f64) -> f64 {
    let integral = tanh_sinh(
        |r, _, _| {
            if r == 0.0 {
                0.0
            } else {
                r * gamma / (r.powf(alpha) + gamma)
            }
        },
        0.0,
        radius,
    );
    lambda * 2.0 * PI * integral
}

/// `sum_{i<n} x^i / i! e^-x` by direct summation in log space.
pub fn poisson_cdf_below(n: usize, x: f64) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    let mut log_fact = 0.0;
    let mut s = 0.0;
    for i in 0..n {
        if i > 0 {
            log_fact += (i as f64).ln();
        }
        s += (i as f64 * x.ln() - x - log_fact).exp();
    }
    s
}

/// Closed-form outage written out from scratch.
pub fn outage_reference(l: usize, lambda: f64, alpha: f64, sigma2: f64, gamma: f64) -> f64 {
    let delta = 2.0 * PI * PI / (alpha * (2.0 * PI / alpha).sin());
    let x = lambda * delta * gamma.powf(2.0 / alpha) + sigma2 * gamma;
    1.0 - poisson_cdf_below(l, x)
}

/// Elementary symmetric polynomials `e_0..e_{kmax}` by enumerating every
/// subset. Exponential cost; keep `p.len()` small.
pub fn elementary_symmetric_enum(p: &[f64], kmax: usize) -> Vec<f64> {
    let n = p.len();
    let mut e = vec![0.0; kmax + 1];
    for mask in 0u32..(1u32 << n) {
        let k = mask.count_ones() as usize;
        if k <= kmax {
            let prod: f64 = (0..n).filter(|j| mask >> j & 1 == 1).map(|j| p[j]).product();
            e[k] += prod;
        }
    }
    e
}

/// Conditional outage from the subset expansion:
/// `1 - sum_{i<L} sum_{k<=i} s^(i-k)/(i-k)! e_k / (exp(s) prod (1 + p_j))`.
pub fn conditional_reference(powers: &[f64], sigma2: f64, l: usize, gamma: f64) -> f64 {
    let p: Vec<f64> = powers.iter().map(|x| x * gamma).collect();
    let e = elementary_symmetric_enum(&p, l - 1);
    let s = sigma2 * gamma;
    let denom = s.exp() * p.iter().map(|x| 1.0 + x).product::<f64>();
    let mut acc = 0.0;
    for i in 0..l {
        for k in 0..=i {
            let j = i - k;
            let fact: f64 = (1..=j).map(|m| m as f64).product();
            acc += s.powi(j as i32) / fact * e[k];
        }
    }
    1.0 - acc / denom
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `e^-t Q(t)` through the regularized upper incomplete gamma function.
pub fn q_scaled_reference(l: usize, t: f64) -> f64 {
    use statrs::function::gamma::{gamma_ur, ln_gamma};
    let head = gamma_ur(l as f64, t);
    let tail = (l as f64 * t.ln() - t - ln_gamma(l as f64)).exp();
    head - tail
}

/// Cyclic Jacobi on the real symmetric embedding `[[A, -B], [B, A]]` of the
/// Hermitian matrix `A + iB`. Returns the `2n` eigenvalues and the matching
/// eigenvectors (as columns of the returned row-major matrix).
pub fn embedded_eigensystem(re: &[Vec<f64>], im: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = re.len();
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    let mut v = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = re[i][j];
            a[i + n][j + n] = re[i][j];
            a[i][j + n] = -im[i][j];
            a[i + n][j] = im[i][j];
        }
    }
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum();
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..m).map(|i| a[i][i]).collect(), v)
}

/// Eigenvalues of a Hermitian matrix, ascending. Each appears twice in the
/// embedding; one copy is returned.
pub fn hermitian_eigenvalues(re: &[Vec<f64>], im: &[Vec<f64>]) -> Vec<f64> {
    let (mut ev, _) = embedded_eigensystem(re, im);
    ev.sort_by(f64::total_cmp);
    ev.chunks(2).map(|c| 0.5 * (c[0] + c[1])).collect()
}

/// `c^H M^-1 c = sum_k (v_k . [Re c; Im c])^2 / lambda_k` over the eigenpairs
/// of the real embedding.
pub fn inverse_form_by_eigen(re: &[Vec<f64>], im: &[Vec<f64>], c: &[(f64, f64)]) -> f64 {
    let n = re.len();
    let (ev, v) = embedded_eigensystem(re, im);
    let x: Vec<f64> = c.iter().map(|z| z.0).chain(c.iter().map(|z| z.1)).collect();
    (0..2 * n)
        .map(|k| {
            let proj: f64 = (0..2 * n).map(|i| v[i][k] * x[i]).sum();
            proj * proj / ev[k]
        })
        .sum()
}

/// Signed distance of `estimate` from `reference` in standard errors.
pub fn z_score(estimate: f64, reference: f64, stderr: f64) -> f64 {
    if stderr == 0.0 {
        if estimate == reference {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (estimate - reference) / stderr
    }
}
