//! Trial-record CSV: one row per trial, shared by simulated and human data.

use std::io::{Read, Write};

use crate::accumulator::Choice;
use crate::attention::FixationTarget;
use crate::error::{Error, Result};
use crate::experiment::{Observation, SimulatedTrial};
use crate::scenario::{ScenarioKind, TrialCondition};

pub const HEADER: [&str; 12] = [
    "trial_id",
    "group",
    "scenario",
    "z1",
    "z2",
    "bias",
    "clarity",
    "choice",
    "rt_ms",
    "n_switches",
    "last_fixation",
    "fixations",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial_id: u64,
    pub group: usize,
    pub condition: TrialCondition,
    pub choice: Choice,
    pub rt_ms: u64,
    pub n_switches: usize,
    pub last_fixation: FixationTarget,
    /// (target, duration in ms); durations sum to `rt_ms`.
    pub fixations: Option<Vec<(FixationTarget, u64)>>,
}

fn to_ms(seconds: f64) -> u64 {
    (seconds * 1000.0).round() as u64
}

impl TrialRecord {
    /// Fixation durations come from millisecond-rounded segment boundaries,
    /// so they always add up to `rt_ms`.
    pub fn from_trial(t: &SimulatedTrial) -> Self {
        let rt_ms = to_ms(t.outcome.rt);
        let mut fixations = Vec::with_capacity(t.outcome.fixations.len());
        let mut start = 0.0;
        let mut prev_ms = 0;
        let last = t.outcome.fixations.len().saturating_sub(1);
        for (i, &(target, dur)) in t.outcome.fixations.iter().enumerate() {
            start += dur;
            let end_ms = if i == last { rt_ms } else { to_ms(start).min(rt_ms) };
            fixations.push((target, end_ms - prev_ms));
            prev_ms = end_ms;
        }
        Self {
            trial_id: t.trial_id,
            group: t.group,
            condition: t.condition,
            choice: t.outcome.choice,
            rt_ms,
            n_switches: t.outcome.n_switches,
            last_fixation: t.outcome.last_fixation,
            fixations: Some(fixations),
        }
    }

    fn fields(&self) -> [String; 12] {
        let c = &self.condition;
        let fixations = self.fixations.as_ref().map_or(String::new(), |f| {
            f.iter()
                .map(|(target, ms)| format!("{target}:{ms}"))
                .collect::<Vec<_>>()
                .join(";")
        });
        [
            self.trial_id.to_string(),
            self.group.to_string(),
            c.scenario().to_string(),
            c.z1().to_string(),
            c.z2().to_string(),
            c.bias().to_string(),
            c.clarity().to_string(),
            self.choice.as_str().to_string(),
            self.rt_ms.to_string(),
            self.n_switches.to_string(),
            self.last_fixation.to_string(),
            fixations,
        ]
    }

    fn parse(rec: &csv::StringRecord, row: usize) -> Result<Self> {
        let err = |m: String| Error::schema(row, m);
        if rec.len() != HEADER.len() {
            return Err(err(format!("expected {} columns, got {}", HEADER.len(), rec.len())));
        }
        fn num<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, row: usize) -> Result<T> {
            rec[i]
                .parse()
                .map_err(|_| Error::schema(row, format!("{}: cannot parse `{}`", HEADER[i], &rec[i])))
        }
        let scenario: ScenarioKind = rec[2].parse().map_err(|e: Error| err(e.to_string()))?;
        let condition = TrialCondition::new(scenario, num(rec, 3, row)?, num(rec, 4, row)?)
            .map_err(|e| err(e.to_string()))?;
        let (bias, clarity): (i32, i32) = (num(rec, 5, row)?, num(rec, 6, row)?);
        if bias != condition.bias() || clarity != condition.clarity() {
            return Err(err(format!(
                "bias/clarity {bias}/{clarity} inconsistent with z1={} z2={}",
                condition.z1(),
                condition.z2()
            )));
        }
        let choice = match &rec[7] {
            "upper" => Choice::Upper,
            "lower" => Choice::Lower,
            "timeout" => Choice::Timeout,
            other => return Err(err(format!("choice: unknown value `{other}`"))),
        };
        let rt_ms: u64 = num(rec, 8, row)?;
        if rt_ms == 0 {
            return Err(err("rt_ms must be > 0".into()));
        }
        let n_switches: usize = num(rec, 9, row)?;
        let target = |s: &str| -> Result<FixationTarget> {
            let t: FixationTarget = s.parse().map_err(|e: Error| err(e.to_string()))?;
            scenario.item_of(t).map_err(|e| err(e.to_string()))?;
            Ok(t)
        };
        let last_fixation = target(&rec[10])?;
        let fixations = if rec[11].is_empty() {
            None
        } else {
            let mut segs = Vec::new();
            for part in rec[11].split(';') {
                let (t, ms) = part
                    .split_once(':')
                    .ok_or_else(|| err(format!("fixations: malformed segment `{part}`")))?;
                let ms: u64 = ms
                    .parse()
                    .map_err(|_| err(format!("fixations: bad duration `{ms}`")))?;
                segs.push((target(t)?, ms));
            }
            if segs.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(err("fixations: consecutive segments repeat a target".into()));
            }
            if segs.iter().map(|s| s.1).sum::<u64>() != rt_ms {
                return Err(err("fixations: durations do not sum to rt_ms".into()));
            }
            if segs.len() - 1 != n_switches {
                return Err(err("fixations: segment count disagrees with n_switches".into()));
            }
            if segs.last().map(|s| s.0) != Some(last_fixation) {
                return Err(err("fixations: final target differs from last_fixation".into()));
            }
            Some(segs)
        };
        Ok(Self {
            trial_id: num(rec, 0, row)?,
            group: num(rec, 1, row)?,
            condition,
            choice,
            rt_ms,
            n_switches,
            last_fixation,
            fixations,
        })
    }
}

impl Observation for TrialRecord {
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
        self.choice
    }
    fn rt(&self) -> f64 {
        self.rt_ms as f64 / 1000.0
    }
    fn n_switches(&self) -> usize {
        self.n_switches
    }
    fn last_fixation(&self) -> FixationTarget {
        self.last_fixation
    }
    fn switch_times(&self) -> Option<Vec<f64>> {
        let segs = self.fixations.as_ref()?;
        let mut end = 0;
        Some(
            segs[..segs.len() - 1]
                .iter()
                .map(|(_, ms)| {
                    end += ms;
                    end as f64 / 1000.0
                })
                .collect(),
        )
    }
}

pub fn write_records<W: Write>(out: W, records: &[TrialRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(HEADER).map_err(io)?;
    for r in records {
        w.write_record(r.fields()).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Parse and validate every row. Row numbers in errors are 1-based data rows.
pub fn read_records<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let header = r.headers().map_err(|e| Error::schema(0, e.to_string()))?.clone();
    if header.iter().ne(HEADER) {
        return Err(Error::schema(0, format!("header must be `{}`", HEADER.join(","))));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::schema(row, e.to_string()))?;
        out.push(TrialRecord::parse(&rec, row)?);
    }
    if out.is_empty() {
        return Err(Error::schema(0, "no data rows"));
    }
    if let Some(s) = out.iter().map(|r| r.scenario()).find(|&s| s != out[0].scenario()) {
        return Err(Error::schema(0, format!("rows mix scenarios ({} and {s})", out[0].scenario())));
    }
    Ok(out)
}
