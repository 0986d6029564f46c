//! Mean and variance of the interference-limited SIR, simulated and exact.
//!
//! cargo run --release --example sir_moments

use ocfield::analytic::{delta_const, sir_mean, sir_variance};
use ocfield::field::{estimate_sir_moments, McConfig, Receiver};
use ocfield::SystemParams;

fn main() -> ocfield::Result<()> {
    let alpha = 4.0;
    // density with lambda * Delta = 1
    let lambda = 1.0 / delta_const(alpha)?.value();
    for l in 1..=3 {
        let p = SystemParams::new(lambda, alpha, 0.0, 1.0, l, 1.0)?;
        let m = estimate_sir_moments(&p, Receiver::Oc, &McConfig::new(200_000, 5))?;
        println!(
            "L = {l}: mean {:.3} (exact {:.3}), variance {:.2} (exact {:.2})",
            m.mean,
            sir_mean(l, alpha, lambda, 1.0)?,
            m.variance,
            sir_variance(l, alpha, lambda, 1.0)?
        );
    }
    Ok(())
}
