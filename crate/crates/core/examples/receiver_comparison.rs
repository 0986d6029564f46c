//! Optimum combining against MRC, ZF and PZF on shared trials, with a
//! per-trial dominance check.
//!
//! cargo run --release --example receiver_comparison

use ocfield::analytic::db_to_linear;
use ocfield::field::{estimate_outage_multi, simulate_trial, McConfig, Receiver};
use ocfield::SystemParams;

fn main() -> ocfield::Result<()> {
    let receivers = [Receiver::Oc, Receiver::Mrc, Receiver::Zf, Receiver::Pzf(1)];
    let base = SystemParams::new(1e-4, 3.5, 0.0, 10.0, 3, db_to_linear(3.0))?;

    print!("{:>9}", "lambda");
    for r in &receivers {
        print!(" {:>8}", r.to_string());
    }
    println!();
    for lambda in [1e-4, 3e-4, 1e-3, 3e-3] {
        let p = base.with_lambda(lambda);
        let est = estimate_outage_multi(&p, &receivers, &McConfig::new(10_000, 11))?;
        print!("{lambda:>9.1e}");
        for e in est {
            print!(" {:>8.4}", e.p_hat);
        }
        println!();
    }

    let p = base.with_lambda(1e-3);
    let mut violations = 0;
    for trial in 0..2_000 {
        let s = simulate_trial(&p, &receivers, 100, 3, trial);
        let oc = s[0].value;
        violations += s[1..].iter().filter(|x| x.value > oc * (1.0 + 1e-9)).count();
    }
    println!("per-trial violations of OC dominance: {violations}");
    Ok(())
}
