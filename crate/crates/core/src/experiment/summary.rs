//! Summary curves: choice probability by bias, RT and switch counts by
//! clarity, the switching-probability time series and last-fixation
//! conditional choice probabilities.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Observation;
use crate::accumulator::Choice;
use crate::attention::{FixationTarget, Item};
use crate::error::{Error, Result};
use crate::scenario::ScenarioKind;

/// Split keys used by [`SplitCurves`].
pub const ALL_CHOICES: &str = "all";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub value: f64,
    pub n: usize,
    #[serde(default)]
    pub small_n: bool,
}

/// group -> key (bias or clarity) -> cell.
pub type GroupedCurve = BTreeMap<usize, BTreeMap<i32, Cell>>;

/// `"all"`, and optionally `"upper"` / `"lower"`, -> grouped curve.
pub type SplitCurves = BTreeMap<String, GroupedCurve>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LastFixationCell {
    pub option1_target: FixationTarget,
    pub option2_target: FixationTarget,
    /// P(upper | last fixation on the option-1 item).
    pub p_upper_given_option1: Option<f64>,
    pub n_option1: usize,
    /// P(upper | last fixation on the option-2 item).
    pub p_upper_given_option2: Option<f64>,
    pub n_option2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisOptions {
    /// Switching time-series bin width, seconds.
    pub bin_width: f64,
    /// Centered moving-average width in bins; must be odd.
    pub smooth_window: usize,
    pub split_by_choice: bool,
    /// Divide switch counts by trials still undecided at bin start (otherwise by all trials).
    pub condition_on_undecided: bool,
    /// Cells with fewer observations are flagged `small_n`.
    pub small_n: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            bin_width: 0.1,
            smooth_window: 5,
            split_by_choice: false,
            condition_on_undecided: true,
            small_n: 5,
        }
    }
}

impl AnalysisOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.bin_width > 0.0) || !self.bin_width.is_finite() {
            return Err(Error::config("analysis.bin_width", "must be > 0"));
        }
        if self.smooth_window % 2 == 0 {
            return Err(Error::config("analysis.smooth_window", "must be odd"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryCurves {
    pub scenario: ScenarioKind,
    pub n_trials: usize,
    pub n_decided: usize,
    pub timeout_rate: f64,
    pub choice_prob_by_bias: GroupedCurve,
    pub rt_by_clarity: SplitCurves,
    pub switches_by_clarity: SplitCurves,
    /// Pooled per-trial switch counts of decided trials, by clarity.
    pub switch_counts_by_clarity: BTreeMap<i32, Vec<usize>>,
    /// clarity -> (bin start, smoothed switching probability).
    pub switching_timeseries: BTreeMap<i32, Vec<(f64, f64)>>,
    pub last_fixation_curves: BTreeMap<i32, LastFixationCell>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

fn decided<O: Observation>(obs: &[O]) -> impl Iterator<Item = &O> {
    obs.iter().filter(|o| o.choice().is_decided())
}

fn grouped_mean<'a, O: Observation + 'a>(
    obs: impl Iterator<Item = &'a O>,
    key: impl Fn(&O) -> i32,
    value: impl Fn(&O) -> f64,
    small_n: usize,
) -> GroupedCurve {
    let mut acc: BTreeMap<usize, BTreeMap<i32, (f64, usize)>> = BTreeMap::new();
    for o in obs {
        let e = acc.entry(o.group()).or_default().entry(key(o)).or_insert((0.0, 0));
        e.0 += value(o);
        e.1 += 1;
    }
    acc.into_iter()
        .map(|(g, cells)| {
            let cells = cells
                .into_iter()
                .map(|(k, (sum, n))| {
                    (
                        k,
                        Cell {
                            value: sum / n as f64,
                            n,
                            small_n: n < small_n,
                        },
                    )
                })
                .collect();
            (g, cells)
        })
        .collect()
}

fn require_decided<O: Observation>(obs: &[O]) -> Result<()> {
    if decided(obs).next().is_none() {
        return Err(Error::EmptyCell("no decided trials".into()));
    }
    Ok(())
}

/// P(upper) per (group, bias) over decided trials.
pub fn choice_prob_by_bias<O: Observation>(obs: &[O]) -> Result<GroupedCurve> {
    require_decided(obs)?;
    Ok(grouped_mean(
        decided(obs),
        |o| o.bias(),
        |o| if o.choice() == Choice::Upper { 1.0 } else { 0.0 },
        0,
    ))
}

fn split_by_clarity<O: Observation>(obs: &[O], split: bool, value: impl Fn(&O) -> f64 + Copy) -> Result<SplitCurves> {
    require_decided(obs)?;
    let mut out = SplitCurves::new();
    out.insert(ALL_CHOICES.into(), grouped_mean(decided(obs), |o| o.clarity(), value, 0));
    if split {
        for choice in [Choice::Upper, Choice::Lower] {
            let curve = grouped_mean(
                decided(obs).filter(|o| o.choice() == choice),
                |o| o.clarity(),
                value,
                0,
            );
            out.insert(choice.as_str().into(), curve);
        }
    }
    Ok(out)
}

/// Mean RT per (group, clarity), optionally also per choice.
pub fn rt_by_clarity<O: Observation>(obs: &[O], split_by_choice: bool) -> Result<SplitCurves> {
    split_by_clarity(obs, split_by_choice, |o| o.rt())
}

/// Mean switch count per (group, clarity), optionally also per choice.
pub fn switches_by_clarity<O: Observation>(obs: &[O], split_by_choice: bool) -> Result<SplitCurves> {
    split_by_clarity(obs, split_by_choice, |o| o.n_switches() as f64)
}

fn bin_of(t: f64, width: f64) -> usize {
    (t / width + 1e-9).floor() as usize
}

/// Per-clarity switching probability in bins of `bin_width`, smoothed by a
/// centered moving average of `smooth_window` bins.
///
/// A bin's raw probability is the share of trials with at least one switch in
/// `[start, start + width)` among trials undecided at `start` (or among all
/// trials when `condition_on_undecided` is false). Bins with an empty
/// denominator are omitted. Observations without fixation data are skipped.
pub fn switching_timeseries<O: Observation>(
    obs: &[O],
    bin_width: f64,
    smooth_window: usize,
    condition_on_undecided: bool,
) -> Result<BTreeMap<i32, Vec<(f64, f64)>>> {
    AnalysisOptions {
        bin_width,
        smooth_window,
        ..AnalysisOptions::default()
    }
    .validate()?;
    let mut by_clarity: BTreeMap<i32, Vec<(f64, Vec<f64>)>> = BTreeMap::new();
    for o in obs {
        if let Some(times) = o.switch_times() {
            by_clarity.entry(o.clarity()).or_default().push((o.rt(), times));
        }
    }
    let mut out = BTreeMap::new();
    for (clarity, trials) in by_clarity {
        let max_rt = trials.iter().map(|t| t.0).fold(0.0, f64::max);
        let n_bins = (max_rt / bin_width).ceil() as usize;
        let mut num = vec![0usize; n_bins];
        let mut den = vec![0usize; n_bins];
        for (rt, times) in &trials {
            let bins: BTreeSet<usize> = times.iter().map(|&t| bin_of(t, bin_width)).collect();
            for b in 0..n_bins {
                let start = b as f64 * bin_width;
                if condition_on_undecided && *rt <= start {
                    break;
                }
                den[b] += 1;
                if bins.contains(&b) {
                    num[b] += 1;
                }
            }
        }
        let raw: Vec<Option<f64>> = num
            .iter()
            .zip(&den)
            .map(|(&k, &n)| (n > 0).then(|| k as f64 / n as f64))
            .collect();
        let half = smooth_window / 2;
        let series = (0..n_bins)
            .filter(|&b| raw[b].is_some())
            .map(|b| {
                let lo = b.saturating_sub(half);
                let hi = (b + half + 1).min(n_bins);
                let vals: Vec<f64> = raw[lo..hi].iter().flatten().copied().collect();
                (b as f64 * bin_width, vals.iter().sum::<f64>() / vals.len() as f64)
            })
            .collect();
        out.insert(clarity, series);
    }
    Ok(out)
}

/// P(upper | last fixation) per bias, pooled over groups.
pub fn last_fixation_curves<O: Observation>(obs: &[O]) -> Result<BTreeMap<i32, LastFixationCell>> {
    require_decided(obs)?;
    let scenario = obs[0].scenario();
    let (one, two) = scenario.items();
    // bias -> [(upper, n) for option1, option2]
    let mut acc: BTreeMap<i32, [(usize, usize); 2]> = BTreeMap::new();
    for o in decided(obs) {
        let slot = match scenario.item_of(o.last_fixation())? {
            Item::Option1 => 0,
            Item::Option2 => 1,
        };
        let e = &mut acc.entry(o.bias()).or_default()[slot];
        e.1 += 1;
        if o.choice() == Choice::Upper {
            e.0 += 1;
        }
    }
    let p = |(k, n): (usize, usize)| (n > 0).then(|| k as f64 / n as f64);
    Ok(acc
        .into_iter()
        .map(|(bias, [a, b])| {
            (
                bias,
                LastFixationCell {
                    option1_target: one,
                    option2_target: two,
                    p_upper_given_option1: p(a),
                    n_option1: a.1,
                    p_upper_given_option2: p(b),
                    n_option2: b.1,
                },
            )
        })
        .collect())
}

/// Mean over groups of every key's cell value.
pub fn group_mean(curve: &GroupedCurve) -> BTreeMap<i32, f64> {
    let mut acc: BTreeMap<i32, (f64, usize)> = BTreeMap::new();
    for cells in curve.values() {
        for (&k, c) in cells {
            let e = acc.entry(k).or_insert((0.0, 0));
            e.0 += c.value;
            e.1 += 1;
        }
    }
    acc.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()
}

fn flag_small(curve: &mut GroupedCurve, threshold: usize) {
    for c in curve.values_mut().flat_map(|cells| cells.values_mut()) {
        c.small_n = c.n < threshold;
    }
}

fn expected_keys(scenario: ScenarioKind, by_bias: bool) -> BTreeSet<i32> {
    scenario
        .conditions()
        .iter()
        .map(|c| if by_bias { c.bias() } else { c.clarity() })
        .collect()
}

/// Every summary curve of one scenario's observations.
pub fn summarize<O: Observation>(obs: &[O], options: &AnalysisOptions) -> Result<SummaryCurves> {
    options.validate()?;
    if obs.is_empty() {
        return Err(Error::EmptyCell("no observations".into()));
    }
    let scenario = obs[0].scenario();
    if obs.iter().any(|o| o.scenario() != scenario) {
        return Err(Error::InvalidDesign("observations mix scenarios".into()));
    }
    let n_trials = obs.len();
    let n_decided = decided(obs).count();
    let mut choice = choice_prob_by_bias(obs)?;
    let mut rt = rt_by_clarity(obs, options.split_by_choice)?;
    let mut sw = switches_by_clarity(obs, options.split_by_choice)?;
    flag_small(&mut choice, options.small_n);
    for c in rt.values_mut().chain(sw.values_mut()) {
        flag_small(c, options.small_n);
    }

    let mut warnings = Vec::new();
    let groups: BTreeSet<usize> = obs.iter().map(|o| o.group()).collect();
    for (name, curve, by_bias) in [
        ("choice_prob_by_bias", &choice, true),
        ("rt_by_clarity", &rt[ALL_CHOICES], false),
    ] {
        for g in &groups {
            let present: BTreeSet<i32> = curve.get(g).map(|c| c.keys().copied().collect()).unwrap_or_default();
            for k in expected_keys(scenario, by_bias).difference(&present) {
                warnings.push(format!("{name}: empty cell group={g} key={k}"));
            }
        }
    }

    let mut switch_counts_by_clarity: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for o in decided(obs) {
        switch_counts_by_clarity.entry(o.clarity()).or_default().push(o.n_switches());
    }

    Ok(SummaryCurves {
        scenario,
        n_trials,
        n_decided,
        timeout_rate: (n_trials - n_decided) as f64 / n_trials as f64,
        choice_prob_by_bias: choice,
        rt_by_clarity: rt,
        switches_by_clarity: sw,
        switch_counts_by_clarity,
        switching_timeseries: switching_timeseries(
            obs,
            options.bin_width,
            options.smooth_window,
            options.condition_on_undecided,
        )?,
        last_fixation_curves: last_fixation_curves(obs)?,
        warnings,
    })
}
