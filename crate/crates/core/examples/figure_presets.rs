//! Write CSV for the figure presets through the harness, as the `ocfield`
//! binary does, into a directory given as the first argument.
//!
//! cargo run --release --example figure_presets -- out/

use std::path::PathBuf;

use ocfield::harness::{run_figure, ConfigLayer, Figure, ScenarioConfig};

fn main() -> ocfield::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    for n in 1..=4 {
        let fig = Figure::from_number(n)?;
        // keep the simulated figures quick; the binary uses the full counts
        let quick = ConfigLayer {
            n_trials: Some(5_000),
            ..Default::default()
        };
        let cfg = ScenarioConfig::resolve(fig.preset().merge(quick))?;
        let report = run_figure(fig, &cfg)?;
        let path = dir.join(format!("figure{n}.csv"));
        std::fs::write(&path, report.to_csv()?)?;
        println!("{}: {} rows", path.display(), report.len());
    }
    Ok(())
}
