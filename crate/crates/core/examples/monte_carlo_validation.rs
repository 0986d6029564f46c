//! Monte Carlo outage of optimum combining against the closed form, and the
//! effect of the finite simulation disk.
//!
//! cargo run --release --example monte_carlo_validation

use ocfield::analytic::{db_to_linear, outage_cdf};
use ocfield::field::{estimate_outage, McConfig, Receiver};
use ocfield::SystemParams;

fn main() -> ocfield::Result<()> {
    let beta = db_to_linear(3.0);
    for (l, lambda) in [(1, 1e-4), (2, 1e-3), (4, 3e-3)] {
        let p = SystemParams::new(lambda, 3.5, 1e-5, 10.0, l, beta)?;
        let exact = outage_cdf(&p)?;
        println!("L = {l}, lambda = {lambda:e}: closed form {exact:.5}");
        for count in [25, 100, 400] {
            let cfg = McConfig::new(20_000, 7).with_expected_count(count);
            let e = estimate_outage(&p, Receiver::Oc, &cfg)?;
            println!(
                "  expected nodes {count:>4}: {:.5} +- {:.5}  (z = {:+.2})",
                e.p_hat,
                e.stderr,
                (e.p_hat - exact) / e.stderr.max(f64::MIN_POSITIVE)
            );
        }
    }
    Ok(())
}
