//! Outage for one frozen interferer layout: exact fading average against a
//! fading-only simulation.
//!
//! cargo run --release --example conditional_outage

use ocfield::field::{
    conditional_outage_cdf, estimate_conditional_outage, received_powers, sample_ppp,
    trial_rng, McConfig,
};
use ocfield::SystemParams;

fn main() -> ocfield::Result<()> {
    let p = SystemParams::new(2e-3, 4.0, 1e-4, 5.0, 2, 1.0)?;
    for seed in 0..4 {
        let net = sample_ppp(p.lambda, 15, &mut trial_rng(seed, 0));
        let powers = received_powers(&net, p.alpha);
        let exact = conditional_outage_cdf(&powers, p.sigma2, p.antennas, p.gamma())?;
        let mc = estimate_conditional_outage(&net, &p, &McConfig::new(50_000, 100 + seed))?;
        println!(
            "layout {seed}: {:>2} nodes, nearest {:>6.2} m, exact {exact:.5}, simulated {:.5} +- {:.5}",
            net.node_count(),
            (0..net.node_count()).map(|k| net.distance(k)).fold(f64::INFINITY, f64::min),
            mc.p_hat,
            mc.stderr
        );
    }
    Ok(())
}
