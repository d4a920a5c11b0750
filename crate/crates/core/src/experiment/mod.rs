//! Trial batches and their execution.

mod summary;

pub use summary::{
    choice_prob_by_bias, group_mean, last_fixation_curves, rt_by_clarity, summarize, switches_by_clarity,
    switching_timeseries, AnalysisOptions, Cell, GroupedCurve, LastFixationCell, SplitCurves, SummaryCurves,
    ALL_CHOICES,
};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accumulator::{simulate_trial, Choice, TrialOutcome};
use crate::attention::{generate_schedule, FixationConfig, FixationTarget};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::scenario::{ScenarioKind, TrialCondition};
use crate::seed::{stream, tag};

/// Anything the summary curves can be computed from: simulated trials and
/// parsed trial records go through the same aggregation code.
pub trait Observation {
    fn group(&self) -> usize;
    fn scenario(&self) -> ScenarioKind;
    fn bias(&self) -> i32;
    fn clarity(&self) -> i32;
    fn choice(&self) -> Choice;
    fn rt(&self) -> f64;
    fn n_switches(&self) -> usize;
    fn last_fixation(&self) -> FixationTarget;
    /// Times of target changes before `rt`; `None` when fixations were not recorded.
    fn switch_times(&self) -> Option<Vec<f64>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatchSize {
    /// Every condition repeated this many times in every group.
    RepsPerCondition(usize),
    /// Total trial count, dealt round-robin over groups.
    Total(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchDesign {
    pub n_groups: usize,
    pub size: BatchSize,
}

impl BatchDesign {
    /// 8 groups x 9 conditions x 20 reps for lane change, 2,320 trials in
    /// 6 groups for car following.
    pub fn default_for(scenario: ScenarioKind) -> Self {
        match scenario {
            ScenarioKind::LaneChange => Self {
                n_groups: 8,
                size: BatchSize::RepsPerCondition(20),
            },
            ScenarioKind::CarFollow => Self {
                n_groups: 6,
                size: BatchSize::Total(2320),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let count = match self.size {
            BatchSize::RepsPerCondition(r) => r,
            BatchSize::Total(t) => t,
        };
        if self.n_groups == 0 || count == 0 {
            return Err(Error::InvalidDesign(format!(
                "groups and trial counts must be positive: {self:?}"
            )));
        }
        if let BatchSize::Total(t) = self.size {
            if t < self.n_groups {
                return Err(Error::InvalidDesign(format!("{t} trials cannot fill {} groups", self.n_groups)));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchEntry {
    pub trial_id: u64,
    pub condition: TrialCondition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialBatch {
    pub scenario: ScenarioKind,
    pub groups: Vec<Vec<BatchEntry>>,
}

impl TrialBatch {
    pub fn len(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &BatchEntry)> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(g, entries)| entries.iter().map(move |e| (g, e)))
    }
}

/// Lay out the trial conditions of every group. Within-group order is
/// shuffled with `rng`; trial ids are then assigned group by group.
pub fn build_batch<R: Rng + ?Sized>(scenario: ScenarioKind, design: &BatchDesign, rng: &mut R) -> Result<TrialBatch> {
    design.validate()?;
    let conditions = scenario.conditions();
    let nc = conditions.len();
    let mut groups: Vec<Vec<TrialCondition>> = match design.size {
        BatchSize::RepsPerCondition(reps) => (0..design.n_groups)
            .map(|_| {
                conditions
                    .iter()
                    .flat_map(|c| std::iter::repeat_n(*c, reps))
                    .collect()
            })
            .collect(),
        BatchSize::Total(total) => {
            let base = total / design.n_groups;
            let extra = total % design.n_groups;
            (0..design.n_groups)
                .map(|g| {
                    let size = base + usize::from(g < extra);
                    (0..size).map(|j| conditions[(j + g) % nc]).collect()
                })
                .collect()
        }
    };
    for g in &mut groups {
        g.shuffle(rng);
    }
    let mut next_id = 0u64;
    let groups = groups
        .into_iter()
        .map(|g| {
            g.into_iter()
                .map(|condition| {
                    let e = BatchEntry {
                        trial_id: next_id,
                        condition,
                    };
                    next_id += 1;
                    e
                })
                .collect()
        })
        .collect();
    Ok(TrialBatch { scenario, groups })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedTrial {
    pub trial_id: u64,
    pub group: usize,
    pub condition: TrialCondition,
    pub outcome: TrialOutcome,
}

impl Observation for SimulatedTrial {
    fn group(&self) -> usize {
        self.group
    }
    fn scenario(&self) -> ScenarioKind {
        self.condition.scenario()
    }
    fn bias(&self) -> i32 {
        self.condition.bias()
    }
    fn clarity(&self) -> i32 {
        self.condition.clarity()
    }
    fn choice(&self) -> Choice {
        self.outcome.choice
    }
    fn rt(&self) -> f64 {
        self.outcome.rt
    }
    fn n_switches(&self) -> usize {
        self.outcome.n_switches
    }
    fn last_fixation(&self) -> FixationTarget {
        self.outcome.last_fixation
    }
    fn switch_times(&self) -> Option<Vec<f64>> {
        Some(self.outcome.switch_times.clone())
    }
}

/// Simulate one batch entry with streams derived from `(master_seed, trial_id)`.
pub fn run_entry(
    scenario: ScenarioKind,
    group: usize,
    entry: &BatchEntry,
    params: &ModelParams,
    fix_config: &FixationConfig,
    master_seed: u64,
) -> Result<SimulatedTrial> {
    let schedule = generate_schedule(
        scenario,
        fix_config,
        params.t_max,
        &mut stream(master_seed, entry.trial_id, tag::SCHEDULE),
    )?;
    let mut noise = stream(master_seed, entry.trial_id, tag::NOISE);
    let outcome = simulate_trial(&entry.condition, params, &schedule, &mut noise, false)?;
    Ok(SimulatedTrial {
        trial_id: entry.trial_id,
        group,
        condition: entry.condition,
        outcome,
    })
}

/// Run every trial of `batch`. Trials are simulated in parallel on the
/// current rayon pool; the result is in batch order and does not depend on the
/// number of threads.
pub fn run_batch(
    batch: &TrialBatch,
    params: &ModelParams,
    fix_config: &FixationConfig,
    master_seed: u64,
) -> Result<Vec<SimulatedTrial>> {
    params.validate()?;
    fix_config.validate(batch.scenario)?;
    let entries: Vec<(usize, &BatchEntry)> = batch.entries().collect();
    entries
        .par_iter()
        .map(|&(g, e)| run_entry(batch.scenario, g, e, params, fix_config, master_seed))
        .collect()
}
