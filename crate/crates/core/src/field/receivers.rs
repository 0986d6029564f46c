use super::{ChannelDraw, NetworkRealization, Receiver};
use crate::analytic::SystemParams;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, project_out, quadratic_form_inverse, ComplexVector, HermitianMatrix};

/// `R = sum_k |X_k|^-alpha c_k c_k^H + sigma2 I`.
pub fn build_covariance(
    net: &NetworkRealization,
    ch: &ChannelDraw,
    sigma2: f64,
    alpha: f64,
) -> HermitianMatrix {
    assert_eq!(net.node_count(), ch.interferers.len(), "one channel per node");
    let mut r = HermitianMatrix::zeros(ch.desired.len());
    for (pos, c) in net.positions.iter().zip(&ch.interferers) {
        let d2 = pos[0] * pos[0] + pos[1] * pos[1];
        r.add_rank_one(d2.powf(-alpha / 2.0), c);
    }
    r.add_diagonal(sigma2);
    r
}

/// Optimum combining SINR `d_r^-alpha c_r^H R^-1 c_r`; infinite when a
/// noiseless covariance leaves part of `c_r` unobstructed.
pub fn oc_sinr(net: &NetworkRealization, ch: &ChannelDraw, params: &SystemParams) -> f64 {
    let r = build_covariance(net, ch, params.sigma2, params.alpha);
    params.d_r.powf(-params.alpha) * quadratic_form_inverse(&ch.desired, &r)
}

/// `w_OC = R^-1 c_r`, or `None` when `R` is singular.
pub fn oc_weight(
    net: &NetworkRealization,
    ch: &ChannelDraw,
    params: &SystemParams,
) -> Option<ComplexVector> {
    let r = build_covariance(net, ch, params.sigma2, params.alpha);
    cholesky(&r).ok().map(|f| f.solve(&ch.desired))
}

/// SINR of an arbitrary combining vector,
/// `d_r^-alpha |w^H c_r|^2 / (w^H R w)`.
pub fn combiner_sinr(
    w: &ComplexVector,
    net: &NetworkRealization,
    ch: &ChannelDraw,
    params: &SystemParams,
) -> Result<f64> {
    if w.is_zero() {
        return Err(Error::domain("w", 0.0, "combining vector must be nonzero"));
    }
    let signal = params.d_r.powf(-params.alpha) * w.dot(&ch.desired).norm_sqr();
    let mut denom = params.sigma2 * w.norm_sqr();
    for (pos, c) in net.positions.iter().zip(&ch.interferers) {
        let d2 = pos[0] * pos[0] + pos[1] * pos[1];
        denom += d2.powf(-params.alpha / 2.0) * w.dot(c).norm_sqr();
    }
    if denom > 0.0 {
        Ok(signal / denom)
    } else if signal > 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(0.0)
    }
}

/// Node indices ordered by decreasing mean received power (increasing
/// distance); ties keep index order.
pub fn interferers_by_strength(net: &NetworkRealization) -> Vec<usize> {
    let d2: Vec<f64> = net
        .positions
        .iter()
        .map(|p| p[0] * p[0] + p[1] * p[1])
        .collect();
    let mut idx: Vec<usize> = (0..d2.len()).collect();
    idx.sort_by(|&a, &b| d2[a].total_cmp(&d2[b]));
    idx
}

/// Combining vector of a suboptimal receiver. `Receiver::Oc` yields
/// `R^-1 c_r` when `R` is invertible.
pub fn receiver_weight(
    receiver: Receiver,
    net: &NetworkRealization,
    ch: &ChannelDraw,
    params: &SystemParams,
) -> Option<ComplexVector> {
    let antennas = ch.desired.len();
    let cancel = match receiver {
        Receiver::Oc => return oc_weight(net, ch, params),
        Receiver::Mrc => 0,
        Receiver::Zf => antennas - 1,
        Receiver::Pzf(k) => k,
    };
    let order = interferers_by_strength(net);
    let basis: Vec<&ComplexVector> = order
        .iter()
        .take(cancel)
        .map(|&k| &ch.interferers[k])
        .collect();
    Some(project_out(&ch.desired, &basis))
}

/// SINR of `receiver` in one trial. A zero-forcing projection that
/// annihilates the desired channel gives zero SINR.
pub fn receiver_sinr(
    receiver: Receiver,
    net: &NetworkRealization,
    ch: &ChannelDraw,
    params: &SystemParams,
) -> f64 {
    match receiver {
        Receiver::Oc => oc_sinr(net, ch, params),
        _ => match receiver_weight(receiver, net, ch, params) {
            Some(w) if !w.is_zero() => combiner_sinr(&w, net, ch, params).unwrap_or(0.0),
            _ => 0.0,
        },
    }
}
