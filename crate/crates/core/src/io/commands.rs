//! The six pipeline commands. Each writes its output file plus, for CSV
//! outputs, a `<out>.meta.json` sidecar. Every output carries the config hash
//! and master seed; nothing time- or host-dependent is written, so equal
//! hashes and seeds give byte-identical files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use super::records::{read_records, write_records, TrialRecord};
use crate::accumulator::{bound_lower, bound_upper, sample_momentary_evidence, simulate_trial, MomentaryParams};
use crate::attention::{generate_schedule, FixationSchedule};
use crate::error::{Error, Result};
use crate::experiment::{build_batch, group_mean, run_batch, summarize, AnalysisOptions, GroupedCurve, SummaryCurves};
use crate::fitting::{fit_ga, noise_floor, FitProblem, FitResult, NoiseFloor, TargetCurves};
use crate::scenario::TrialCondition;
use crate::seed::{stream, tag};
use crate::stats::{kruskal_wallis, mse, slope_ttest, KwResult, TTestResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub config_hash: String,
    /// SHA-256 of each input file, keyed by role.
    pub inputs: BTreeMap<String, String>,
    pub config: serde_json::Value,
}

impl Meta {
    fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed: config.seed,
            config_hash: config.hash(),
            inputs: BTreeMap::new(),
            config: config.to_json(),
        }
    }

    fn with_input(mut self, role: &str, bytes: &[u8]) -> Self {
        self.inputs.insert(role.into(), hex::encode(Sha256::digest(bytes)));
        self
    }
}

/// JSON output: metadata plus the command's payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub meta: Meta,
    pub data: T,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Accepts a bare [`SummaryCurves`] document or an envelope holding one.
pub fn parse_curves(bytes: &[u8]) -> Result<SummaryCurves> {
    let schema = |e: serde_json::Error| Error::schema(e.line(), e.to_string());
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(schema)?;
    let inner = match value.get("data") {
        Some(d) if value.get("meta").is_some() => d.clone(),
        _ => value,
    };
    serde_json::from_value(inner).map_err(|e| Error::schema(0, e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub n_trials: usize,
    pub n_decided: usize,
    pub timeout_rate: f64,
}

/// Simulate the configured batch and write one [`TrialRecord`] per trial.
pub fn cmd_simulate(config: &RunConfig, out: &Path) -> Result<SimulateReport> {
    let batch = build_batch(config.scenario, &config.design, &mut stream(config.seed, 0, tag::DESIGN))?;
    let trials = run_batch(&batch, &config.model, &config.fixation, config.seed)?;
    let records: Vec<TrialRecord> = trials.iter().map(TrialRecord::from_trial).collect();
    let mut w = create(out)?;
    write_records(&mut w, &records)?;
    w.flush()?;
    let n_decided = trials.iter().filter(|t| t.outcome.choice.is_decided()).count();
    let report = SimulateReport {
        n_trials: trials.len(),
        n_decided,
        timeout_rate: 1.0 - n_decided as f64 / trials.len() as f64,
    };
    write_json(
        &sidecar_path(out),
        &Envelope {
            meta: Meta::new("simulate", config),
            data: &report,
        },
    )?;
    Ok(report)
}

/// Summary curves of a trial CSV (simulated or human).
pub fn cmd_summarize(config: &RunConfig, trials: &Path, out: &Path, options: &AnalysisOptions) -> Result<SummaryCurves> {
    let bytes = read(trials)?;
    let records = read_records(bytes.as_slice())?;
    let curves = summarize(&records, options).map_err(|e| match e {
        Error::EmptyCell(m) | Error::InvalidDesign(m) => Error::schema(0, m),
        other => other,
    })?;
    write_json(
        out,
        &Envelope {
            meta: Meta::new("summarize", config).with_input("trials", &bytes),
            data: &curves,
        },
    )?;
    Ok(curves)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeTest {
    pub curve: String,
    pub n_groups: usize,
    pub result: Option<TTestResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MseEntry {
    pub curve: String,
    pub n_keys: usize,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub slope_tests: Vec<SlopeTest>,
    pub kruskal_wallis_switches: Option<KwResult>,
    pub mse: Vec<MseEntry>,
    pub warnings: Vec<String>,
}

fn slope_test(name: &str, curve: &GroupedCurve, warnings: &mut Vec<String>) -> SlopeTest {
    let xy: Vec<(Vec<f64>, Vec<f64>)> = curve
        .values()
        .map(|cells| cells.iter().map(|(&k, c)| (f64::from(k), c.value)).unzip())
        .collect();
    let (result, error) = match slope_ttest(&xy, 0.0) {
        Ok(r) => (Some(r), None),
        Err(e) => {
            warnings.push(format!("{name}: {e}"));
            (None, Some(e.to_string()))
        }
    };
    SlopeTest {
        curve: name.into(),
        n_groups: xy.len(),
        result,
        error,
    }
}

fn named_curves(c: &SummaryCurves) -> Vec<(String, &GroupedCurve)> {
    let mut out = vec![("choice_prob_by_bias".to_string(), &c.choice_prob_by_bias)];
    for (split, curve) in &c.rt_by_clarity {
        out.push((format!("rt_by_clarity.{split}"), curve));
    }
    for (split, curve) in &c.switches_by_clarity {
        out.push((format!("switches_by_clarity.{split}"), curve));
    }
    out
}

/// Slope t-tests across groups for every curve, Kruskal-Wallis on switch
/// counts across clarity levels, and MSE against optional reference curves.
/// Degenerate tests become warnings, not errors.
pub fn stats_report(curves: &SummaryCurves, reference: Option<&SummaryCurves>) -> Result<StatsReport> {
    let mut warnings = Vec::new();
    let slope_tests = named_curves(curves)
        .into_iter()
        .map(|(name, c)| slope_test(&name, c, &mut warnings))
        .collect();
    let samples: Vec<Vec<f64>> = curves
        .switch_counts_by_clarity
        .values()
        .map(|v| v.iter().map(|&n| n as f64).collect())
        .collect();
    let kruskal_wallis_switches = match kruskal_wallis(&samples) {
        Ok(r) => Some(r),
        Err(e) => {
            warnings.push(format!("kruskal_wallis_switches: {e}"));
            None
        }
    };
    let mut mse_entries = Vec::new();
    if let Some(reference) = reference {
        let ours: BTreeMap<String, &GroupedCurve> = named_curves(curves).into_iter().collect();
        for (name, theirs) in named_curves(reference) {
            let Some(mine) = ours.get(&name) else {
                warnings.push(format!("{name}: missing from curves, not compared"));
                continue;
            };
            let (a, b) = (group_mean(mine), group_mean(theirs));
            let (x, y): (Vec<f64>, Vec<f64>) = b
                .iter()
                .filter_map(|(k, &t)| a.get(k).map(|&m| (m, t)))
                .unzip();
            if x.is_empty() {
                warnings.push(format!("{name}: no shared keys"));
                continue;
            }
            mse_entries.push(MseEntry {
                curve: name,
                n_keys: x.len(),
                mse: mse(&x, &y)?,
            });
        }
    }
    Ok(StatsReport {
        slope_tests,
        kruskal_wallis_switches,
        mse: mse_entries,
        warnings,
    })
}

pub fn cmd_stats(config: &RunConfig, curves: &Path, reference: Option<&Path>, out: &Path) -> Result<StatsReport> {
    let bytes = read(curves)?;
    let parsed = parse_curves(&bytes)?;
    let mut meta = Meta::new("stats", config).with_input("curves", &bytes);
    let reference = match reference {
        Some(p) => {
            let rb = read(p)?;
            meta = meta.with_input("reference", &rb);
            Some(parse_curves(&rb)?)
        }
        None => None,
    };
    let report = stats_report(&parsed, reference.as_ref())?;
    write_json(out, &Envelope { meta, data: &report })?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub fit: FitResult,
    /// Objective spread between independent simulations of the fitted parameters.
    pub noise_floor: Option<NoiseFloor>,
    pub below_noise_floor: Option<bool>,
}

/// Fit the model to target curves with the configured GA, search space and
/// per-evaluation batch design.
pub fn cmd_fit(config: &RunConfig, targets: &Path, out: &Path) -> Result<FitReport> {
    let bytes = read(targets)?;
    let curves = parse_curves(&bytes)?;
    if curves.scenario != config.scenario {
        return Err(Error::schema(
            0,
            format!("targets are {} but the run is configured for {}", curves.scenario, config.scenario),
        ));
    }
    let batch = build_batch(config.scenario, &config.fit.design, &mut stream(config.seed, 0, tag::DESIGN))?;
    let problem = FitProblem {
        targets: TargetCurves::from_summary(&curves)?,
        batch,
        fix_config: config.fixation,
        template: config.model,
        weights: config.fit.weights,
    };
    let fit = fit_ga(&problem, &config.fit.space, &config.fit.ga)?;
    let floor = if config.fit.noise_floor_samples >= 2 {
        Some(noise_floor(
            &fit.best_params,
            &problem.batch,
            &problem.fix_config,
            &problem.weights,
            config.fit.noise_floor_samples,
            config.seed,
        )?)
    } else {
        None
    };
    let report = FitReport {
        below_noise_floor: floor.as_ref().map(|f| fit.objective <= f.threshold),
        fit,
        noise_floor: floor,
    };
    write_json(
        out,
        &Envelope {
            meta: Meta::new("fit", config).with_input("targets", &bytes),
            data: &report,
        },
    )?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentaryReport {
    pub n: usize,
    pub attended_mean: Option<f64>,
    pub unattended_mean: Option<f64>,
}

/// Momentary-evidence samples; the attended target alternates between the
/// scenario's two items.
pub fn cmd_momentary(config: &RunConfig, out: &Path) -> Result<MomentaryReport> {
    let s = &config.momentary;
    let params = MomentaryParams {
        z_bar: s.z_bar,
        sigma_z: s.sigma_z,
        theta: s.theta,
        dt: s.dt,
    };
    let condition = TrialCondition::new(config.scenario, s.z1, s.z2)?;
    let (one, two) = config.scenario.items();
    let mut rng = stream(config.seed, 0, tag::MOMENTARY);
    let mut w = create(out)?;
    writeln!(w, "t,attended,attended_evidence,unattended_evidence")?;
    let (mut sa, mut su) = (0.0, 0.0);
    for i in 0..s.n {
        let target = if i % 2 == 0 { one } else { two };
        let m = sample_momentary_evidence(&condition, target, &params, i as f64 * s.dt, &mut rng)?;
        sa += m.attended_evidence;
        su += m.unattended_evidence;
        writeln!(w, "{},{},{},{}", m.t, m.attended, m.attended_evidence, m.unattended_evidence)?;
    }
    w.flush()?;
    let n = s.n as f64;
    let report = MomentaryReport {
        n: s.n,
        attended_mean: (s.n > 0).then(|| sa / n),
        unattended_mean: (s.n > 0).then(|| su / n),
    };
    write_json(
        &sidecar_path(out),
        &Envelope {
            meta: Meta::new("momentary", config),
            data: &report,
        },
    )?;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub z1: i32,
    pub z2: i32,
    pub choice: crate::accumulator::Choice,
    pub rt: f64,
    pub n_switches: usize,
    pub n_rows: usize,
}

/// One trial's RDV trajectory with the bounds at every step.
pub fn cmd_trace(config: &RunConfig, out: &Path) -> Result<TraceReport> {
    let p = &config.model;
    let condition = TrialCondition::new(config.scenario, config.trace.z1, config.trace.z2)?;
    let schedule = match config.trace.single_target {
        Some(target) => FixationSchedule::single(config.scenario, target, p.t_max + p.dt)?,
        None => generate_schedule(
            config.scenario,
            &config.fixation,
            p.t_max,
            &mut stream(config.seed, 0, tag::SCHEDULE),
        )?,
    };
    let outcome = simulate_trial(&condition, p, &schedule, &mut stream(config.seed, 0, tag::NOISE), true)?;
    let trace = outcome.trace.as_deref().unwrap_or_default();
    let mut w = create(out)?;
    writeln!(w, "t,v,target,upper,lower")?;
    for pt in trace {
        writeln!(
            w,
            "{},{},{},{},{}",
            pt.t,
            pt.v,
            pt.target,
            bound_upper(pt.t, p.r, p.b_start),
            bound_lower(pt.t, p.r, p.b_start)
        )?;
    }
    w.flush()?;
    let report = TraceReport {
        z1: condition.z1(),
        z2: condition.z2(),
        choice: outcome.choice,
        rt: outcome.rt,
        n_switches: outcome.n_switches,
        n_rows: trace.len(),
    };
    write_json(
        &sidecar_path(out),
        &Envelope {
            meta: Meta::new("trace", config),
            data: &report,
        },
    )?;
    Ok(report)
}
