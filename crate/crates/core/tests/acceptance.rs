//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{delta_by_quadrature, poisson_cdf_below, z_score};
use ocfield::analytic::*;
use ocfield::contention::*;
use ocfield::field::*;
use ocfield::harness::*;
use ocfield::SystemParams;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Fig. 1 scenario at the given worker count.
fn figure_one(workers: usize) -> (Vec<SimulationRow>, String) {
    let cfg = ScenarioConfig::resolve(Figure::OutageValidation.preset().merge(ConfigLayer {
        workers: Some(workers),
        ..Default::default()
    }))
    .unwrap();
    let rows = run_simulation(&cfg).unwrap();
    let csv = csv_string(&rows).unwrap();
    (rows, csv)
}

fn closed_form_agreement(rows: &[SimulationRow]) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for l in 1..=4 {
        let pts: Vec<&SimulationRow> = rows.iter().filter(|r| r.antennas == l).collect();
        assert_eq!(pts.len(), 10);
        let good = pts
            .iter()
            .filter(|r| z_score(r.mc_outage, r.analytic_outage, r.stderr).abs() <= 4.0)
            .count();
        let worst = pts
            .iter()
            .map(|r| z_score(r.mc_outage, r.analytic_outage, r.stderr))
            .fold(0.0f64, |a, z| if z.abs() > a.abs() { z } else { a });
        let degenerate = pts.iter().filter(|r| r.stderr == 0.0 && r.mc_outage != r.analytic_outage).count();
        pass &= good >= 9;
        let note = if degenerate > 0 { format!(", {degenerate} with zero stderr") } else { String::new() };
        parts.push(format!("L={l}: {good}/10 within 4 se, worst z {worst:+.1}{note}"));
    }
    outcome(pass, parts.join("; "))
}

fn conditional_oracle() -> Outcome {
    let beta = db_to_linear(3.0);
    let mut checked = 0;
    let mut worst = 0.0f64;
    let mut failures = 0;
    let mut seed = 0;
    while checked < 20 {
        seed += 1;
        let l = 1 + checked % 4;
        let p = SystemParams::new(1e-3, 3.5, 1e-5, 10.0, l, beta).unwrap();
        let net = sample_ppp(p.lambda, 15, &mut trial_rng(1000 + seed, 0));
        if net.node_count() > 30 || net.node_count() == 0 {
            continue;
        }
        checked += 1;
        let exact =
            conditional_outage_cdf(&received_powers(&net, p.alpha), p.sigma2, l, p.gamma()).unwrap();
        let mc = estimate_conditional_outage(&net, &p, &McConfig::new(100_000, 2000 + seed)).unwrap();
        let z = z_score(mc.p_hat, exact, mc.stderr);
        if z.abs() > 4.0 {
            failures += 1;
        }
        if z.abs() > worst.abs() {
            worst = z;
        }
    }
    outcome(failures == 0, format!("{checked} layouts, {failures} outside 4 se, worst z {worst:+.2}"))
}

fn receiver_ordering() -> Outcome {
    let receivers = [Receiver::Oc, Receiver::Mrc, Receiver::Zf, Receiver::Pzf(1), Receiver::default_pzf(3)];
    let cfg = ScenarioConfig::resolve(Figure::ReceiverComparison.preset()).unwrap();
    let mut violations = 0;
    let mut trials = 0;
    for &lambda in &cfg.lambda_grid {
        let p = cfg.params(lambda, 3).unwrap();
        for t in 0..1_000 {
            let s = simulate_trial(&p, &receivers, cfg.expected_count, cfg.master_seed, t);
            let oc = s[0].value;
            violations += s[1..].iter().filter(|x| x.value > oc * (1.0 + 1e-9)).count();
            trials += 1;
        }
    }
    outcome(violations == 0, format!("{trials} trials, {violations} violations"))
}

fn optimum_root() -> Outcome {
    let mut bracket_ok = true;
    let mut raw_fail = Vec::new();
    let mut worst_scaled = 0.0f64;
    for l in 1..=200 {
        let g = g_of_l(l).unwrap();
        bracket_ok &= l as f64 / 2.0 <= g && g <= l as f64;
        if !(q_poly(l, g).unwrap().abs() <= 1e-10) {
            raw_fail.push(l);
        }
        worst_scaled = worst_scaled.max(q_poly_scaled(l, g).unwrap().abs());
    }
    let g1 = g_of_l(1).unwrap() == 1.0;
    let g2 = (g_of_l(2).unwrap() - (1.0 + 5f64.sqrt()) / 2.0).abs() <= 1e-12;

    let (alpha, d_r, beta) = (3.5, 10.0, db_to_linear(3.0));
    let mut grid_ok = true;
    let mut worst_gap = 0.0f64;
    for l in 1..=5 {
        let base = SystemParams::new(1e-3, alpha, 0.0, d_r, l, beta).unwrap();
        let opt = ContentionOptimum::new(l, alpha, base.gamma()).unwrap();
        let at_opt = throughput_density(&base.clone().with_lambda(opt.lambda_max)).unwrap();
        let gap = (at_opt / opt.t_max - 1.0).abs();
        let grid_max = log_grid(opt.lambda_max / 100.0, opt.lambda_max * 100.0, 20_001)
            .into_iter()
            .map(|lam| throughput_density(&base.clone().with_lambda(lam)).unwrap())
            .fold(0.0, f64::max);
        let excess = grid_max / opt.t_max - 1.0;
        worst_gap = worst_gap.max(gap).max(excess);
        grid_ok &= gap <= 1e-12 && excess <= 1e-12;
    }

    let pass = bracket_ok && raw_fail.is_empty() && g1 && g2 && grid_ok;
    let raw = if raw_fail.is_empty() {
        "all L".to_string()
    } else {
        format!(
            "fails for {} of 200 L (first L={}, largest clean L={})",
            raw_fail.len(),
            raw_fail[0],
            raw_fail[0] - 1
        )
    };
    outcome(
        pass,
        format!(
            "bracket {bracket_ok}; |Q(g)| <= 1e-10 {raw}; |e^-g Q(g)| max {worst_scaled:.1e}; \
             g(1)=1 {g1}; g(2) {g2}; grid {grid_ok} (worst {worst_gap:.1e})"
        ),
    )
}

fn linear_scaling() -> Outcome {
    let (alpha, gamma) = (3.5, db_to_linear(3.0) * 10f64.powf(3.5));
    let scale = contention_scale(alpha, gamma).unwrap();
    let base = lambda_max(1, alpha, gamma).unwrap();
    let mut ratio_ok = true;
    let mut bound_ok = true;
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for l in 1..=64 {
        let lm = lambda_max(l, alpha, gamma).unwrap();
        let g = g_of_l(l).unwrap();
        ratio_ok &= (lm / base / g - 1.0).abs() <= 1e-12;
        bound_ok &= (0.5..=1.0).contains(&(g / l as f64));
        if l >= 4 {
            xs.push(l as f64);
            ys.push(lm);
        }
    }
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx) * (x - mx)).sum::<f64>();
    let normalized = slope * scale;
    let slope_ok = (0.5..=1.0).contains(&normalized);
    outcome(
        ratio_ok && bound_ok && slope_ok,
        format!("ratio {ratio_ok}; g/L in [0.5, 1] {bound_ok}; slope {normalized:.4} / (Delta gamma^(2/alpha))"),
    )
}

fn moments() -> Outcome {
    let alpha = 4.0;
    let lambda = 1.0 / delta_const(alpha).unwrap().value();
    let p = SystemParams::new(lambda, alpha, 0.0, 1.0, 1, 1.0).unwrap();
    let m = estimate_sir_moments(&p, Receiver::Oc, &McConfig::new(1_000_000, 18)).unwrap();
    let (mean, var) = (sir_mean(1, alpha, lambda, 1.0).unwrap(), sir_variance(1, alpha, lambda, 1.0).unwrap());
    let mean_ok = (m.mean / mean - 1.0).abs() <= 0.10;
    let var_ok = (m.variance / var - 1.0).abs() <= 0.25;
    outcome(
        mean_ok && var_ok && (mean - 2.0).abs() < 1e-12 && (var - 20.0).abs() < 1e-10,
        format!("mean {:.4} (exact {mean}), variance {:.3} (exact {var})", m.mean, m.variance),
    )
}

fn delta_cross_check() -> Outcome {
    let mut worst = 0.0f64;
    for alpha in [2.5, 3.0, 3.5, 4.0, 5.0] {
        let d = delta_const(alpha).unwrap().value();
        worst = worst.max((d - delta_by_quadrature(alpha)).abs() / d);
    }
    outcome(worst <= 1e-8, format!("max relative gap {worst:.1e}"))
}

/// Deterministic sweep point `i` of `n` over the parameter box.
fn sweep_point(i: usize) -> (f64, f64, f64, f64, usize, f64) {
    let u = |k: u64| {
        let h = point_seed(k, i, 0);
        (h >> 11) as f64 / (1u64 << 53) as f64
    };
    let lambda = 10f64.powf(-6.0 + 4.0 * u(1));
    let alpha = 2.2 + 3.8 * u(2);
    let sigma2 = 10f64.powf(-8.0 + 6.0 * u(3));
    let d_r = 0.5 + 30.0 * u(4);
    let l = 1 + (u(5) * 12.0) as usize;
    let beta = db_to_linear(-10.0 + 30.0 * u(6));
    (lambda, alpha, sigma2, d_r, l, beta)
}

fn identity_suite() -> Outcome {
    let mut exact_ok = true;
    let mut radius_worst = 0.0f64;
    let mut monotone_bad = 0;
    for i in 0..1_000 {
        let (lambda, alpha, sigma2, d_r, l, beta) = sweep_point(i);
        let p = SystemParams::new(lambda, alpha, sigma2, d_r, l, beta).unwrap();
        let gamma = p.gamma();
        exact_ok &= outage_cdf(&p.clone().with_lambda(0.0)).unwrap()
            == outage_noise_limited(l, sigma2, gamma).unwrap();
        let mut quiet = p.clone();
        quiet.sigma2 = 0.0;
        exact_ok &= outage_cdf(&quiet).unwrap()
            == outage_interference_limited(l, lambda, alpha, gamma).unwrap();

        let d = delta_const(alpha).unwrap().value();
        let r = (d / std::f64::consts::PI).sqrt() * gamma.powf(1.0 / alpha);
        let disk = 1.0 - poisson_cdf_below(l, lambda * std::f64::consts::PI * r * r);
        radius_worst = radius_worst.max((disk - outage_cdf(&quiet).unwrap()).abs());

        let f = outage_cdf(&p).unwrap();
        let mut up = Vec::new();
        let mut q = p.clone();
        q.beta *= 1.1;
        up.push(outage_cdf(&q).unwrap());
        up.push(outage_cdf(&p.clone().with_lambda(lambda * 1.1)).unwrap());
        let mut q = p.clone();
        q.sigma2 *= 1.1;
        up.push(outage_cdf(&q).unwrap());
        let down = outage_cdf(&p.clone().with_antennas(l + 1)).unwrap();
        monotone_bad += up.iter().filter(|&&v| v < f).count() + (down > f) as usize;
    }
    outcome(
        exact_ok && radius_worst <= 1e-14 && monotone_bad == 0,
        format!(
            "limits exact {exact_ok}; radius identity max gap {radius_worst:.1e}; \
             {monotone_bad} monotonicity violations over 1000 points"
        ),
    )
}

fn main() {
    let start = Instant::now();
    let mut fig1_single: Option<(Vec<SimulationRow>, String)> = None;
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    let mut run = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = catch_unwind(AssertUnwindSafe(f))
            .unwrap_or_else(|_| outcome(false, "panicked"));
        println!(
            "criterion {id} [{}] {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        results.push((id, name, o));
    };

    run(1, "closed-form outage vs simulation", &mut || {
        let r = figure_one(1);
        let o = closed_form_agreement(&r.0);
        fig1_single = Some(r);
        o
    });
    run(2, "conditional outage oracle", &mut conditional_oracle);
    run(3, "receiver ordering per trial", &mut receiver_ordering);
    run(4, "optimum contention root", &mut optimum_root);
    run(5, "linear density scaling", &mut linear_scaling);
    run(6, "SIR moments", &mut moments);
    run(7, "geometry constant cross-check", &mut delta_cross_check);
    run(8, "identity suite", &mut identity_suite);
    run(9, "determinism across workers", &mut || {
        let single = match &fig1_single {
            Some((_, csv)) => csv.clone(),
            None => figure_one(1).1,
        };
        let same = [2, 8].iter().all(|&w| figure_one(w).1 == single);
        outcome(same, format!("1/2/8 workers byte-identical: {same} ({} bytes)", single.len()))
    });

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    println!(
        "acceptance: {}/{} criteria pass in {:.0}s",
        results.len() - failed.len(),
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
