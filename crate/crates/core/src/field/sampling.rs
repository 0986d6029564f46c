use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use super::{ChannelDraw, NetworkRealization};
use crate::linalg::{ComplexVector, C64};

/// Counter-based generator used for every trial.
pub type TrialRng = ChaCha8Rng;

/// Independent stream for trial `trial` under `master_seed`. Depends on
/// nothing else, so results do not depend on how trials are scheduled.
pub fn trial_rng(master_seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Radius of the disk holding `expected_count` nodes on average.
pub fn disk_radius(lambda: f64, expected_count: u32) -> f64 {
    (expected_count as f64 / (lambda * PI)).sqrt()
}

/// Samples a homogeneous Poisson field of density `lambda` restricted to the
/// disk that holds `expected_count` nodes on average.
pub fn sample_ppp<R: Rng + ?Sized>(
    lambda: f64,
    expected_count: u32,
    rng: &mut R,
) -> NetworkRealization {
    assert!(lambda > 0.0 && expected_count >= 1, "need lambda > 0 and expected_count >= 1");
    let radius = disk_radius(lambda, expected_count);
    let count = Poisson::new(expected_count as f64)
        .expect("positive Poisson mean")
        .sample(rng) as usize;
    let positions = (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            [r * theta.cos(), r * theta.sin()]
        })
        .collect();
    NetworkRealization {
        positions,
        disk_radius: radius,
    }
}

fn cn01<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

fn cn_vector<R: Rng + ?Sized>(antennas: usize, rng: &mut R) -> ComplexVector {
    (0..antennas).map(|_| cn01(rng)).collect::<Vec<_>>().into()
}

/// Desired and `n` interferer propagation vectors with i.i.d. CN(0, 1)
/// entries (real and imaginary parts each of variance 1/2).
pub fn draw_channels<R: Rng + ?Sized>(antennas: usize, n: usize, rng: &mut R) -> ChannelDraw {
    let desired = cn_vector(antennas, rng);
    let interferers = (0..n).map(|_| cn_vector(antennas, rng)).collect();
    ChannelDraw {
        desired,
        interferers,
    }
}
