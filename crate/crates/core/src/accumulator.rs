//! Single-trial RDV integration with attention modulation and collapsing
//! bounds, plus the momentary-evidence sampler used for distribution plots.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::attention::{theta, FixationSchedule, FixationTarget, Item};
use crate::error::{Error, Result};
use crate::params::{ModelParams, SignConvention};
use crate::scenario::TrialCondition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    Upper,
    Lower,
    Timeout,
}

impl Choice {
    pub fn as_str(self) -> &'static str {
        match self {
            Choice::Upper => "upper",
            Choice::Lower => "lower",
            Choice::Timeout => "timeout",
        }
    }

    pub fn is_decided(self) -> bool {
        self != Choice::Timeout
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: f64,
    pub v: f64,
    pub target: FixationTarget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub choice: Choice,
    /// Seconds from accumulation start.
    pub rt: f64,
    pub n_switches: usize,
    pub last_fixation: FixationTarget,
    /// Fixation segments truncated at `rt`.
    pub fixations: Vec<(FixationTarget, f64)>,
    /// Target changes strictly before `rt`.
    pub switch_times: Vec<f64>,
    pub trace: Option<Vec<TracePoint>>,
}

pub fn bound_upper(t: f64, r: f64, b_start: f64) -> f64 {
    (-r * t).exp() * b_start
}

pub fn bound_lower(t: f64, r: f64, b_start: f64) -> f64 {
    -bound_upper(t, r, b_start)
}

/// Deterministic part of one RDV increment.
pub fn drift(condition: &TrialCondition, item: Item, theta: f64, d: f64, convention: SignConvention) -> f64 {
    let z1 = f64::from(condition.z1());
    let z2 = f64::from(condition.z2());
    match (item, convention) {
        (Item::Option1, _) => d * (z1 - theta * z2),
        (Item::Option2, SignConvention::AddmStandard) => d * (theta * z1 - z2),
        (Item::Option2, SignConvention::PaperLiteral) => d * (z2 - theta * z1),
    }
}

/// One RDV update: `v + drift + noise`.
///
/// `attended` must belong to the condition's scenario; any target that is not
/// the option-1 item is treated as the option-2 item.
pub fn rdv_step(
    v: f64,
    condition: &TrialCondition,
    attended: FixationTarget,
    theta: f64,
    d: f64,
    noise: f64,
    convention: SignConvention,
) -> f64 {
    let item = match condition.scenario().item_of(attended) {
        Ok(item) => item,
        Err(_) => {
            debug_assert!(false, "{attended} is not a {} target", condition.scenario());
            Item::Option2
        }
    };
    v + drift(condition, item, theta, d, convention) + noise
}

/// Run one trial until a bound is reached or `t_max` elapses.
///
/// One standard-normal draw is consumed per step, also when `sigma == 0`.
pub fn simulate_trial<R: Rng + ?Sized>(
    condition: &TrialCondition,
    params: &ModelParams,
    schedule: &FixationSchedule,
    rng: &mut R,
    record_trace: bool,
) -> Result<TrialOutcome> {
    params.validate()?;
    if schedule.scenario() != condition.scenario() {
        return Err(Error::InvalidSchedule(format!(
            "schedule is for {} but condition is {}",
            schedule.scenario(),
            condition.scenario()
        )));
    }
    let steps = params.max_steps();
    let t_last = steps as f64 * params.dt;
    if schedule.total() + 1e-9 < t_last {
        return Err(Error::InvalidSchedule(format!(
            "schedule covers {:.4} s but the trial may run to {:.4} s",
            schedule.total(),
            t_last
        )));
    }

    let theta = theta(condition.clarity(), params.m, params.n)?;
    let segments = schedule.segments();
    let ends = schedule.ends();
    let items: Vec<Item> = segments
        .iter()
        .map(|&(target, _)| condition.scenario().item_of(target))
        .collect::<Result<_>>()?;

    let mut trace = record_trace.then(|| {
        let mut v = Vec::with_capacity(1024);
        v.push(TracePoint {
            t: 0.0,
            v: 0.0,
            target: segments[0].0,
        });
        v
    });

    let mut v = 0.0;
    let mut cursor = 0usize;
    let mut decided = None;
    for k in 1..=steps {
        let t = k as f64 * params.dt;
        while cursor + 1 < segments.len() && ends[cursor] <= t {
            cursor += 1;
        }
        let z: f64 = rng.sample(StandardNormal);
        v += drift(condition, items[cursor], theta, params.d, params.convention);
        v += params.sigma * z;
        if let Some(tr) = trace.as_mut() {
            tr.push(TracePoint {
                t,
                v,
                target: segments[cursor].0,
            });
        }
        let b = bound_upper(t, params.r, params.b_start);
        if v >= b {
            decided = Some((Choice::Upper, t));
            break;
        }
        if v <= -b {
            decided = Some((Choice::Lower, t));
            break;
        }
    }

    let (choice, rt) = decided.unwrap_or((Choice::Timeout, params.t_max));
    let last_fixation = segments[cursor].0;
    let switch_times: Vec<f64> = schedule
        .switch_times()
        .iter()
        .copied()
        .take_while(|&b| b < rt)
        .collect();
    Ok(TrialOutcome {
        choice,
        rt,
        n_switches: switch_times.len(),
        last_fixation,
        fixations: schedule.realized(rt),
        switch_times,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentaryParams {
    pub z_bar: f64,
    pub sigma_z: f64,
    pub theta: f64,
    pub dt: f64,
}

impl MomentaryParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_z >= 0.0) || !(self.dt > 0.0) || !(self.theta > 0.0 && self.theta <= 1.0) || !self.z_bar.is_finite() {
            return Err(Error::InvalidParams(format!(
                "momentary sampler needs sigma_z >= 0, dt > 0, theta in (0,1]: {self:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentarySample {
    pub t: f64,
    pub attended: FixationTarget,
    pub attended_evidence: f64,
    pub unattended_evidence: f64,
}

/// Draw attended `z_a * dt` and unattended `theta * z_u * dt` with
/// `z ~ normal(z_bar, sigma_z^2)` independently.
pub fn sample_momentary_evidence<R: Rng + ?Sized>(
    condition: &TrialCondition,
    attended: FixationTarget,
    params: &MomentaryParams,
    t: f64,
    rng: &mut R,
) -> Result<MomentarySample> {
    params.validate()?;
    condition.scenario().item_of(attended)?;
    let za: f64 = rng.sample(StandardNormal);
    let zu: f64 = rng.sample(StandardNormal);
    let za = params.z_bar + params.sigma_z * za;
    let zu = params.z_bar + params.sigma_z * zu;
    Ok(MomentarySample {
        t,
        attended,
        attended_evidence: za * params.dt,
        unattended_evidence: params.theta * zu * params.dt,
    })
}
