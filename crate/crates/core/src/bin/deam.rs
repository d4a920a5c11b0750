use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use deam::attention::FixationTarget;
use deam::io::{self, Overrides, RunConfig};
use deam::params::SignConvention;
use deam::scenario::ScenarioKind;

#[derive(Parser)]
#[command(name = "deam", version, about = "Attention-modulated evidence accumulation for driver decisions")]
struct Cli {
    /// TOML run configuration; defaults to the scenario's published settings.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_parser = parse_scenario)]
    scenario: Option<ScenarioKind>,
    #[arg(long, global = true, value_parser = parse_convention)]
    convention: Option<SignConvention>,
    /// Worker threads; outputs do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the configured trial batch to a trial CSV.
    Simulate {
        #[arg(long)]
        out: PathBuf,
    },
    /// Summary curves of a trial CSV.
    Summarize {
        trials: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Slope t-tests, Kruskal-Wallis and MSE for a curves file.
    Stats {
        curves: PathBuf,
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the model to target curves with the genetic algorithm.
    Fit {
        targets: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Momentary-evidence samples.
    Momentary {
        #[arg(long)]
        z_bar: Option<f64>,
        #[arg(long)]
        sigma_z: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// RDV trace of a single trial.
    Trace {
        #[arg(long)]
        z1: Option<i32>,
        #[arg(long)]
        z2: Option<i32>,
        /// Attend one target for the whole trial.
        #[arg(long, value_parser = parse_target)]
        single_target: Option<FixationTarget>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_scenario(s: &str) -> Result<ScenarioKind, String> {
    s.parse().map_err(|e: deam::Error| e.to_string())
}

fn parse_convention(s: &str) -> Result<SignConvention, String> {
    s.parse().map_err(|e: deam::Error| e.to_string())
}

fn parse_target(s: &str) -> Result<FixationTarget, String> {
    s.parse().map_err(|e: deam::Error| e.to_string())
}

fn load(cli: &Cli) -> deam::Result<RunConfig> {
    let overrides = Overrides {
        scenario: cli.scenario,
        seed: cli.seed,
        convention: cli.convention,
    };
    match &cli.config {
        Some(path) => RunConfig::load(path, &overrides),
        None => RunConfig::from_toml_str("", &overrides),
    }
}

fn summary_line(path: &Path, what: impl std::fmt::Display) {
    eprintln!("wrote {}: {what}", path.display());
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut config = load(&cli)?;
    match &cli.command {
        Command::Simulate { out } => {
            let r = io::cmd_simulate(&config, out)?;
            summary_line(out, format_args!("{} trials, timeout rate {:.4}", r.n_trials, r.timeout_rate));
        }
        Command::Summarize { trials, out } => {
            let c = io::cmd_summarize(&config, trials, out, &config.analysis)?;
            summary_line(out, format_args!("{} trials, {} decided", c.n_trials, c.n_decided));
        }
        Command::Stats { curves, reference, out } => {
            let r = io::cmd_stats(&config, curves, reference.as_deref(), out)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            summary_line(out, format_args!("{} slope tests", r.slope_tests.len()));
        }
        Command::Fit { targets, out } => {
            let r = io::cmd_fit(&config, targets, out)?;
            summary_line(out, format_args!("objective {:.6}", r.fit.objective));
        }
        Command::Momentary {
            z_bar,
            sigma_z,
            theta,
            dt,
            n,
            out,
        } => {
            let m = &mut config.momentary;
            m.z_bar = z_bar.unwrap_or(m.z_bar);
            m.sigma_z = sigma_z.unwrap_or(m.sigma_z);
            m.theta = theta.unwrap_or(m.theta);
            m.dt = dt.unwrap_or(m.dt);
            m.n = n.unwrap_or(m.n);
            let r = io::cmd_momentary(&config, out)?;
            summary_line(out, format_args!("{} samples", r.n));
        }
        Command::Trace {
            z1,
            z2,
            single_target,
            out,
        } => {
            let t = &mut config.trace;
            t.z1 = z1.unwrap_or(t.z1);
            t.z2 = z2.unwrap_or(t.z2);
            t.single_target = single_target.or(t.single_target);
            let r = io::cmd_trace(&config, out)?;
            summary_line(out, format_args!("{:?} at {} s", r.choice, r.rt));
        }
    }
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    use deam::Error as E;
    match e.downcast_ref::<E>() {
        Some(
            E::Config { .. }
            | E::Schema { .. }
            | E::InvalidState(_)
            | E::InvalidParams(_)
            | E::InvalidConfig(_)
            | E::InvalidSpace(_)
            | E::InvalidDesign(_),
        ) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
