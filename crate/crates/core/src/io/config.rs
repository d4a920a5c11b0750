//! TOML run configuration. Every section is optional; missing values fall
//! back to the scenario's published defaults. Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::attention::{FixationConfig, FixationTarget};
use crate::error::{Error, Result};
use crate::experiment::{AnalysisOptions, BatchDesign, BatchSize};
use crate::fitting::{GaConfig, ObjectiveWeights, SearchSpace};
use crate::params::{ModelParams, SignConvention};
use crate::scenario::{ScenarioKind, TrialCondition};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: Option<ScenarioKind>,
    seed: Option<u64>,
    model: Option<RawModel>,
    fixation: Option<RawFixation>,
    design: Option<RawDesign>,
    analysis: Option<AnalysisOptions>,
    fit: Option<RawFit>,
    momentary: Option<MomentarySettings>,
    trace: Option<RawTrace>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    d: Option<f64>,
    m: Option<f64>,
    n: Option<f64>,
    r: Option<f64>,
    b_start: Option<f64>,
    sigma: Option<f64>,
    dt: Option<f64>,
    t_max: Option<f64>,
    convention: Option<SignConvention>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFixation {
    first_target: Option<FixationTarget>,
    first_duration_mean: Option<f64>,
    first_duration_sd: Option<f64>,
    later_duration_log_median: Option<f64>,
    later_duration_log_sd: Option<f64>,
    min_duration: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesign {
    n_groups: Option<usize>,
    reps: Option<usize>,
    total: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFit {
    ga: Option<GaConfig>,
    space: Option<SearchSpace>,
    weights: Option<ObjectiveWeights>,
    noise_floor_samples: Option<u64>,
    design: Option<RawDesign>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrace {
    z1: Option<i32>,
    z2: Option<i32>,
    single_target: Option<FixationTarget>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MomentarySettings {
    pub z_bar: f64,
    pub sigma_z: f64,
    pub theta: f64,
    pub dt: f64,
    pub n: usize,
    /// First state of the sampled condition; the attended target alternates.
    pub z1: i32,
    pub z2: i32,
}

impl Default for MomentarySettings {
    fn default() -> Self {
        Self {
            z_bar: 1.0,
            sigma_z: 1.0,
            theta: 0.3,
            dt: 0.01,
            n: 10_000,
            z1: 2,
            z2: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSettings {
    pub ga: GaConfig,
    pub space: SearchSpace,
    pub weights: ObjectiveWeights,
    pub noise_floor_samples: u64,
    /// Batch simulated per objective evaluation.
    pub design: BatchDesign,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSettings {
    pub z1: i32,
    pub z2: i32,
    /// Hold attention on one target for the whole trial instead of drawing a schedule.
    pub single_target: Option<FixationTarget>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub seed: u64,
    pub model: ModelParams,
    pub fixation: FixationConfig,
    pub design: BatchDesign,
    pub analysis: AnalysisOptions,
    pub fit: FitSettings,
    pub momentary: MomentarySettings,
    pub trace: TraceSettings,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub scenario: Option<ScenarioKind>,
    pub seed: Option<u64>,
    pub convention: Option<SignConvention>,
}

pub const DEFAULT_SEED: u64 = 20_240_601;

fn design_from(raw: Option<RawDesign>, default: BatchDesign, field: &str) -> Result<BatchDesign> {
    let raw = raw.unwrap_or_default();
    let size = match (raw.reps, raw.total) {
        (Some(_), Some(_)) => {
            return Err(Error::config(field, "set either `reps` or `total`, not both"));
        }
        (Some(r), None) => BatchSize::RepsPerCondition(r),
        (None, Some(t)) => BatchSize::Total(t),
        (None, None) => default.size,
    };
    let d = BatchDesign {
        n_groups: raw.n_groups.unwrap_or(default.n_groups),
        size,
    };
    d.validate().map_err(|e| Error::config(field, e.to_string()))?;
    Ok(d)
}

/// Field named in a `name=value ...` validation message.
fn named_field(section: &str, e: Error) -> Error {
    let msg = e.to_string();
    let detail = msg.split_once(": ").map_or(msg.as_str(), |(_, m)| m);
    match detail.split_once('=') {
        Some((name, _)) if !name.contains(' ') => Error::config(format!("{section}.{name}"), detail),
        _ => Error::config(section, detail),
    }
}

impl RunConfig {
    pub fn defaults(scenario: ScenarioKind) -> Self {
        Self::from_toml_str("", &Overrides { scenario: Some(scenario), ..Overrides::default() })
            .expect("built-in defaults are valid")
    }

    pub fn load(path: &std::path::Path, overrides: &Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn from_toml_str(text: &str, overrides: &Overrides) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))?;
        let scenario = overrides.scenario.or(raw.scenario).unwrap_or(ScenarioKind::LaneChange);

        let base = ModelParams::published(scenario);
        let m = raw.model.unwrap_or_default();
        let model = ModelParams {
            d: m.d.unwrap_or(base.d),
            m: m.m.unwrap_or(base.m),
            n: m.n.unwrap_or(base.n),
            r: m.r.unwrap_or(base.r),
            b_start: m.b_start.unwrap_or(base.b_start),
            sigma: m.sigma.unwrap_or(base.sigma),
            dt: m.dt.unwrap_or(base.dt),
            t_max: m.t_max.unwrap_or(base.t_max),
            convention: overrides.convention.or(m.convention).unwrap_or_default(),
        };
        model.validate().map_err(|e| named_field("model", e))?;

        let fb = FixationConfig::for_scenario(scenario);
        let f = raw.fixation.unwrap_or_default();
        let fixation = FixationConfig {
            first_target: f.first_target.unwrap_or(fb.first_target),
            first_duration_mean: f.first_duration_mean.unwrap_or(fb.first_duration_mean),
            first_duration_sd: f.first_duration_sd.unwrap_or(fb.first_duration_sd),
            later_duration_log_median: f.later_duration_log_median.unwrap_or(fb.later_duration_log_median),
            later_duration_log_sd: f.later_duration_log_sd.unwrap_or(fb.later_duration_log_sd),
            min_duration: f.min_duration.unwrap_or(fb.min_duration),
        };
        fixation.validate(scenario).map_err(|e| named_field("fixation", e))?;

        let design = design_from(raw.design, BatchDesign::default_for(scenario), "design")?;

        let analysis = raw.analysis.unwrap_or_default();
        analysis.validate()?;

        let seed = overrides.seed.or(raw.seed).unwrap_or(DEFAULT_SEED);
        let rf = raw.fit.unwrap_or_default();
        let mut ga = rf.ga.unwrap_or_default();
        if rf.ga.is_none() {
            ga.seed = seed;
        }
        ga.validate().map_err(|e| Error::config("fit.ga", e.to_string()))?;
        let space = rf.space.unwrap_or_default();
        space.validate().map_err(|e| Error::config("fit.space", e.to_string()))?;
        let fit = FitSettings {
            ga,
            space,
            weights: rf.weights.unwrap_or_default(),
            noise_floor_samples: rf.noise_floor_samples.unwrap_or(20),
            design: design_from(rf.design, design, "fit.design")?,
        };

        let momentary = raw.momentary.unwrap_or_default();
        crate::accumulator::MomentaryParams {
            z_bar: momentary.z_bar,
            sigma_z: momentary.sigma_z,
            theta: momentary.theta,
            dt: momentary.dt,
        }
        .validate()
        .map_err(|e| Error::config("momentary", e.to_string()))?;
        TrialCondition::new(scenario, momentary.z1, momentary.z2).map_err(|e| Error::config("momentary", e.to_string()))?;

        let t = raw.trace.unwrap_or_default();
        let first = scenario.conditions()[0];
        let trace = TraceSettings {
            z1: t.z1.unwrap_or(first.z1()),
            z2: t.z2.unwrap_or(first.z2()),
            single_target: t.single_target,
        };
        TrialCondition::new(scenario, trace.z1, trace.z2).map_err(|e| Error::config("trace", e.to_string()))?;
        if let Some(target) = trace.single_target {
            scenario
                .item_of(target)
                .map_err(|e| Error::config("trace.single_target", e.to_string()))?;
        }

        Ok(Self {
            scenario,
            seed,
            model,
            fixation,
            design,
            analysis,
            fit,
            momentary,
            trace,
        })
    }

    /// Canonical JSON of the resolved configuration.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
