//! The file-based pipeline used by the CLI: simulate, summarize, stats, trace.

use deam::io::{cmd_simulate, cmd_stats, cmd_summarize, cmd_trace, Overrides, RunConfig};

fn main() -> deam::Result<()> {
    let dir = std::env::temp_dir().join("deam-config-pipeline");
    std::fs::create_dir_all(&dir)?;
    let config = RunConfig::from_toml_str(
        "scenario = \"car-follow\"\nseed = 5\n[design]\nn_groups = 4\n",
        &Overrides::default(),
    )?;
    println!("config hash {}", config.hash());

    let trials = dir.join("trials.csv");
    let r = cmd_simulate(&config, &trials)?;
    println!("{} trials -> {}", r.n_trials, trials.display());
    let curves = dir.join("curves.json");
    let c = cmd_summarize(&config, &trials, &curves, &config.analysis)?;
    println!("{} decided -> {}", c.n_decided, curves.display());
    let stats = dir.join("stats.json");
    let s = cmd_stats(&config, &curves, None, &stats)?;
    for t in &s.slope_tests {
        println!("  {}: {:?}", t.curve, t.result);
    }
    let trace = dir.join("trace.csv");
    let t = cmd_trace(&config, &trace)?;
    println!("trace {:?} at {} s -> {}", t.choice, t.rt, trace.display());
    Ok(())
}
