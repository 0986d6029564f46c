//! Closed-form outage against contention density for a few array sizes,
//! with the noise-only and interference-only limits alongside.
//!
//! cargo run --example outage_curves

use ocfield::analytic::{
    db_to_linear, outage_cdf, outage_interference_limited, outage_noise_limited,
    throughput_density,
};
use ocfield::harness::log_grid;
use ocfield::SystemParams;

fn main() -> ocfield::Result<()> {
    let base = SystemParams::new(1e-4, 3.5, db_to_linear(-50.0), 10.0, 1, db_to_linear(3.0))?;
    let gamma = base.gamma();
    println!("gamma = {gamma:.3}");

    for l in 1..=4 {
        let p0 = base.with_antennas(l);
        let floor = outage_noise_limited(l, p0.sigma2, gamma)?;
        println!("\nL = {l}  (noise floor {floor:.3e})");
        println!("{:>10} {:>10} {:>10} {:>12}", "lambda", "F", "F_sir", "throughput");
        for lambda in log_grid(1e-5, 1e-2, 7) {
            let p = p0.with_lambda(lambda);
            println!(
                "{:>10.2e} {:>10.4} {:>10.4} {:>12.4e}",
                lambda,
                outage_cdf(&p)?,
                outage_interference_limited(l, lambda, p.alpha, gamma)?,
                throughput_density(&p)?
            );
        }
    }
    Ok(())
}
