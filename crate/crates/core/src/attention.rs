//! Attention modulation and open-loop fixation schedules.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::ScenarioKind;

/// Attention modulation for a given evidence clarity: `1 / (m * clarity + n)`.
pub fn theta(clarity: i32, m: f64, n: f64) -> Result<f64> {
    if !(m >= 0.0) || !(n >= 1.0) {
        return Err(Error::InvalidParams(format!(
            "theta needs m >= 0 and n >= 1 (m={m}, n={n})"
        )));
    }
    if clarity < 0 {
        return Err(Error::InvalidParams(format!("clarity {clarity} < 0")));
    }
    Ok(1.0 / (m * f64::from(clarity) + n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FixationTarget {
    #[serde(rename = "RV")]
    Rv,
    #[serde(rename = "FV")]
    Fv,
    #[serde(rename = "NonFV")]
    NonFv,
}

impl FixationTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            FixationTarget::Rv => "RV",
            FixationTarget::Fv => "FV",
            FixationTarget::NonFv => "NonFV",
        }
    }
}

impl fmt::Display for FixationTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixationTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "RV" => Ok(FixationTarget::Rv),
            "FV" => Ok(FixationTarget::Fv),
            "NonFV" => Ok(FixationTarget::NonFv),
            other => Err(Error::InvalidSchedule(format!("unknown fixation target `{other}`"))),
        }
    }
}

/// Which decision option an attended item supports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Item {
    /// Supports the upper-bound decision (RV for lane change, FV for car following).
    Option1,
    /// Supports the lower-bound decision (FV for lane change, non-FV for car following).
    Option2,
}

impl ScenarioKind {
    /// The (option-1, option-2) fixation targets of this scenario.
    pub fn items(self) -> (FixationTarget, FixationTarget) {
        match self {
            ScenarioKind::LaneChange => (FixationTarget::Rv, FixationTarget::Fv),
            ScenarioKind::CarFollow => (FixationTarget::Fv, FixationTarget::NonFv),
        }
    }

    pub fn item_of(self, target: FixationTarget) -> Result<Item> {
        let (one, two) = self.items();
        if target == one {
            Ok(Item::Option1)
        } else if target == two {
            Ok(Item::Option2)
        } else {
            Err(Error::InvalidSchedule(format!(
                "target {target} is not part of the {self} scenario"
            )))
        }
    }

    fn other_target(self, target: FixationTarget) -> FixationTarget {
        let (one, two) = self.items();
        if target == one {
            two
        } else {
            one
        }
    }
}

/// Ordered fixation segments. Consecutive targets always differ.
#[derive(Debug, Clone, PartialEq)]
pub struct FixationSchedule {
    scenario: ScenarioKind,
    segments: Vec<(FixationTarget, f64)>,
    ends: Vec<f64>,
}

impl FixationSchedule {
    pub fn new(scenario: ScenarioKind, segments: Vec<(FixationTarget, f64)>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidSchedule("no segments".into()));
        }
        for (i, &(target, duration)) in segments.iter().enumerate() {
            scenario.item_of(target)?;
            if !(duration > 0.0) || !duration.is_finite() {
                return Err(Error::InvalidSchedule(format!(
                    "segment {i} has non-positive duration {duration}"
                )));
            }
            if i > 0 && segments[i - 1].0 == target {
                return Err(Error::InvalidSchedule(format!(
                    "segments {} and {i} repeat target {target}",
                    i - 1
                )));
            }
        }
        let ends = segments
            .iter()
            .scan(0.0, |acc, &(_, dur)| {
                *acc += dur;
                Some(*acc)
            })
            .collect();
        Ok(Self {
            scenario,
            segments,
            ends,
        })
    }

    /// One fixation on `target` lasting `duration`.
    pub fn single(scenario: ScenarioKind, target: FixationTarget, duration: f64) -> Result<Self> {
        Self::new(scenario, vec![(target, duration)])
    }

    pub fn scenario(&self) -> ScenarioKind {
        self.scenario
    }

    pub fn segments(&self) -> &[(FixationTarget, f64)] {
        &self.segments
    }

    pub fn total(&self) -> f64 {
        *self.ends.last().expect("schedule is never empty")
    }

    /// Cumulative end time of every segment.
    pub fn ends(&self) -> &[f64] {
        &self.ends
    }

    /// Times at which the target changes.
    pub fn switch_times(&self) -> &[f64] {
        &self.ends[..self.ends.len() - 1]
    }

    /// Segment index containing `t`; a boundary belongs to the later segment.
    pub fn segment_index(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0) || t >= self.total() {
            return Err(Error::OutOfRange {
                t,
                total: self.total(),
            });
        }
        Ok(self.ends.partition_point(|&end| end <= t))
    }

    /// Segments truncated at time `until`.
    pub fn realized(&self, until: f64) -> Vec<(FixationTarget, f64)> {
        let mut out = Vec::new();
        let mut start = 0.0;
        for (&(target, _), &end) in self.segments.iter().zip(&self.ends) {
            if start >= until && !out.is_empty() {
                break;
            }
            out.push((target, end.min(until) - start));
            start = end;
        }
        out
    }
}

pub fn fixation_at(schedule: &FixationSchedule, t: f64) -> Result<FixationTarget> {
    schedule
        .segment_index(t)
        .map(|i| schedule.segments[i].0)
}

/// Distributions that generate fixation schedules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixationConfig {
    pub first_target: FixationTarget,
    /// Seconds.
    pub first_duration_mean: f64,
    pub first_duration_sd: f64,
    /// Median of the log-normal used for every later fixation, seconds.
    pub later_duration_log_median: f64,
    /// Standard deviation in log space.
    pub later_duration_log_sd: f64,
    pub min_duration: f64,
}

impl FixationConfig {
    pub fn lane_change() -> Self {
        Self {
            first_target: FixationTarget::Fv,
            first_duration_mean: 1.0,
            first_duration_sd: 0.1,
            later_duration_log_median: 0.5,
            later_duration_log_sd: 0.4,
            min_duration: 0.1,
        }
    }

    pub fn car_follow() -> Self {
        Self {
            first_target: FixationTarget::NonFv,
            later_duration_log_median: 0.7,
            ..Self::lane_change()
        }
    }

    pub fn for_scenario(scenario: ScenarioKind) -> Self {
        match scenario {
            ScenarioKind::LaneChange => Self::lane_change(),
            ScenarioKind::CarFollow => Self::car_follow(),
        }
    }

    /// Mean of a later (log-normal) fixation duration, ignoring the floor.
    pub fn later_duration_mean(&self) -> f64 {
        self.later_duration_log_median * (0.5 * self.later_duration_log_sd.powi(2)).exp()
    }

    pub fn validate(&self, scenario: ScenarioKind) -> Result<()> {
        let positive = [
            ("first_duration_mean", self.first_duration_mean),
            ("later_duration_log_median", self.later_duration_log_median),
            ("min_duration", self.min_duration),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name}={v} must be > 0")));
            }
        }
        let non_negative = [
            ("first_duration_sd", self.first_duration_sd),
            ("later_duration_log_sd", self.later_duration_log_sd),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!("{name}={v} must be >= 0")));
            }
        }
        scenario
            .item_of(self.first_target)
            .map_err(|_| {
                Error::InvalidConfig(format!(
                    "first_target {} is not a {scenario} target",
                    self.first_target
                ))
            })
            .map(|_| ())
    }
}

/// Draw an alternating schedule that extends past `t_max`.
///
/// The first duration is normal(mean, sd) and every later one is log-normal;
/// both are floored at `min_duration`.
pub fn generate_schedule<R: Rng + ?Sized>(
    scenario: ScenarioKind,
    config: &FixationConfig,
    t_max: f64,
    rng: &mut R,
) -> Result<FixationSchedule> {
    config.validate(scenario)?;
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidConfig(format!("t_max={t_max} must be > 0")));
    }
    let z: f64 = rng.sample(StandardNormal);
    let first = (config.first_duration_mean + config.first_duration_sd * z).max(config.min_duration);
    let mut segments = vec![(config.first_target, first)];
    let mut total = first;
    let mut target = config.first_target;
    while total <= t_max {
        target = scenario.other_target(target);
        let z: f64 = rng.sample(StandardNormal);
        let dur = (config.later_duration_log_median * (config.later_duration_log_sd * z).exp())
            .max(config.min_duration);
        segments.push((target, dur));
        total += dur;
    }
    FixationSchedule::new(scenario, segments)
}
