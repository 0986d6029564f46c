//! Optimum ALOHA density and peak spatial throughput versus array size.
//!
//! cargo run --example contention_optimum

use ocfield::analytic::{db_to_linear, gamma_from_beta};
use ocfield::contention::{contention_scale, g_of_l, ContentionOptimum};

fn main() -> ocfield::Result<()> {
    let (alpha, d_r) = (3.5, 10.0);
    let gamma = gamma_from_beta(db_to_linear(3.0), d_r, alpha)?;
    let scale = contention_scale(alpha, gamma)?;
    println!("Delta gamma^(2/alpha) = {scale:.4}");
    println!("{:>3} {:>9} {:>7} {:>12} {:>12}", "L", "g(L)", "g/L", "lambda_max", "T_max");
    for l in [1, 2, 3, 4, 5, 6, 8, 12, 16, 32, 64] {
        let opt = ContentionOptimum::new(l, alpha, gamma)?;
        println!(
            "{:>3} {:>9.5} {:>7.4} {:>12.4e} {:>12.4e}",
            l,
            opt.g,
            opt.g / l as f64,
            opt.lambda_max,
            opt.t_max
        );
    }
    // g(L) approaches L from below; the gap grows like sqrt(L).
    for l in [100, 200] {
        let g = g_of_l(l)?;
        println!("L = {l}: L - g = {:.3}, sqrt(L) = {:.3}", l as f64 - g, (l as f64).sqrt());
    }
    Ok(())
}
