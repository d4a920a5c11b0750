//! Driving scenarios, perceptual states and the evidence affordances derived
//! from them.
//!
//! Perceptual states are the integers 1 (near), 2 (moderate) and 3 (far).
//! In a lane-change scenario `z1` is the rear vehicle (RV) and `z2` the front
//! vehicle (FV). In car-following `z1` is the FV and `z2` is held at 2 for the
//! non-FV surroundings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const STATES: [i32; 3] = [1, 2, 3];
pub const CAR_FOLLOW_Z2: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    LaneChange,
    CarFollow,
}

impl ScenarioKind {
    /// Label of the decision at the upper bound.
    pub fn upper_label(self) -> &'static str {
        match self {
            ScenarioKind::LaneChange => "lane-changing",
            ScenarioKind::CarFollow => "decelerating",
        }
    }

    /// Label of the decision at the lower bound.
    pub fn lower_label(self) -> &'static str {
        match self {
            ScenarioKind::LaneChange => "lane-keeping",
            ScenarioKind::CarFollow => "keep-driving",
        }
    }

    /// Every valid condition of this scenario, in (z1, z2) lexicographic order.
    pub fn conditions(self) -> Vec<TrialCondition> {
        match self {
            ScenarioKind::LaneChange => STATES
                .iter()
                .flat_map(|&z1| STATES.iter().map(move |&z2| TrialCondition { scenario: self, z1, z2 }))
                .collect(),
            ScenarioKind::CarFollow => STATES
                .iter()
                .map(|&z1| TrialCondition {
                    scenario: self,
                    z1,
                    z2: CAR_FOLLOW_Z2,
                })
                .collect(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::LaneChange => "lane-change",
            ScenarioKind::CarFollow => "car-follow",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lane-change" => Ok(ScenarioKind::LaneChange),
            "car-follow" => Ok(ScenarioKind::CarFollow),
            other => Err(Error::InvalidState(format!("unknown scenario `{other}`"))),
        }
    }
}

/// A validated scenario plus perceptual-state pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialCondition {
    scenario: ScenarioKind,
    z1: i32,
    z2: i32,
}

/// Evidence bias (`z1 - z2`) and clarity (`|z1 - z2|`) of a condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvidenceAffordance {
    pub bias: i32,
    pub clarity: i32,
}

pub fn make_condition(scenario: ScenarioKind, z1: i32, z2: i32) -> Result<TrialCondition> {
    TrialCondition::new(scenario, z1, z2)
}

pub fn evidence_bias(c: &TrialCondition) -> i32 {
    c.z1 - c.z2
}

pub fn evidence_clarity(c: &TrialCondition) -> i32 {
    (c.z1 - c.z2).abs()
}

impl TrialCondition {
    pub fn new(scenario: ScenarioKind, z1: i32, z2: i32) -> Result<Self> {
        for (name, z) in [("z1", z1), ("z2", z2)] {
            if !STATES.contains(&z) {
                return Err(Error::InvalidState(format!("{name}={z} not in {{1,2,3}}")));
            }
        }
        if scenario == ScenarioKind::CarFollow && z2 != CAR_FOLLOW_Z2 {
            return Err(Error::InvalidState(format!(
                "car-follow requires z2=2 (non-FV state), got {z2}"
            )));
        }
        Ok(Self { scenario, z1, z2 })
    }

    pub fn scenario(&self) -> ScenarioKind {
        self.scenario
    }

    pub fn z1(&self) -> i32 {
        self.z1
    }

    pub fn z2(&self) -> i32 {
        self.z2
    }

    pub fn bias(&self) -> i32 {
        evidence_bias(self)
    }

    pub fn clarity(&self) -> i32 {
        evidence_clarity(self)
    }

    pub fn affordance(&self) -> EvidenceAffordance {
        EvidenceAffordance {
            bias: self.bias(),
            clarity: self.clarity(),
        }
    }
}
