use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::ScenarioKind;

/// How the RDV update treats attention to the option-2 item.
///
/// `AddmStandard` drives V toward the bound of whichever item is attended.
/// `PaperLiteral` uses `d * (z2 - theta * z1)` for the option-2 item, which
/// makes the mean drift independent of the sign of the bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SignConvention {
    #[default]
    #[serde(rename = "addm")]
    AddmStandard,
    #[serde(rename = "paper")]
    PaperLiteral,
}

impl FromStr for SignConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "addm" => Ok(SignConvention::AddmStandard),
            "paper" => Ok(SignConvention::PaperLiteral),
            other => Err(Error::InvalidParams(format!("unknown convention `{other}`"))),
        }
    }
}

impl fmt::Display for SignConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignConvention::AddmStandard => "addm",
            SignConvention::PaperLiteral => "paper",
        })
    }
}

pub const DEFAULT_DT: f64 = 0.001;
pub const DEFAULT_T_MAX: f64 = 20.0;

/// The six free model parameters plus simulation controls.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Integration speed per step.
    pub d: f64,
    /// Slope of `1 / theta` in evidence clarity.
    pub m: f64,
    /// Offset of `1 / theta`; `theta = 1 / n` at zero clarity.
    pub n: f64,
    /// Bound collapse rate, 1/s.
    pub r: f64,
    pub b_start: f64,
    /// Per-step noise standard deviation (not scaled by `dt`).
    pub sigma: f64,
    pub dt: f64,
    pub t_max: f64,
    #[serde(default)]
    pub convention: SignConvention,
}

impl ModelParams {
    /// Fitted lane-change parameters.
    pub fn lane_change() -> Self {
        Self {
            d: 0.003,
            m: 0.18,
            n: 1.25,
            r: 0.35,
            b_start: 2.8,
            sigma: 0.03,
            dt: DEFAULT_DT,
            t_max: DEFAULT_T_MAX,
            convention: SignConvention::AddmStandard,
        }
    }

    /// Fitted car-following parameters.
    pub fn car_follow() -> Self {
        Self {
            d: 0.0008,
            m: 0.1,
            n: 1.5,
            r: 0.15,
            b_start: 1.5,
            sigma: 0.01,
            dt: DEFAULT_DT,
            t_max: DEFAULT_T_MAX,
            convention: SignConvention::AddmStandard,
        }
    }

    pub fn published(scenario: ScenarioKind) -> Self {
        match scenario {
            ScenarioKind::LaneChange => Self::lane_change(),
            ScenarioKind::CarFollow => Self::car_follow(),
        }
    }

    /// Reduce to the baseline aDDM: constant `theta` and fixed bounds.
    pub fn as_addm(mut self, theta: f64) -> Self {
        self.m = 0.0;
        self.n = 1.0 / theta;
        self.r = 0.0;
        self
    }

    pub fn with_convention(mut self, convention: SignConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Number of integration steps up to and including `t_max`.
    pub fn max_steps(&self) -> u64 {
        // small epsilon so that t_max = k * dt in decimal lands on step k
        ((self.t_max / self.dt) * (1.0 + 1e-12)).floor() as u64
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&str, f64, bool, &str); 8] = [
            ("d", self.d, self.d.is_finite(), "must be finite"),
            ("m", self.m, self.m >= 0.0, "must be >= 0"),
            ("n", self.n, self.n >= 1.0, "must be >= 1"),
            ("r", self.r, self.r >= 0.0, "must be >= 0"),
            ("b_start", self.b_start, self.b_start > 0.0, "must be > 0"),
            ("sigma", self.sigma, self.sigma >= 0.0, "must be >= 0"),
            ("dt", self.dt, self.dt > 0.0, "must be > 0"),
            ("t_max", self.t_max, self.t_max >= self.dt, "must be >= dt"),
        ];
        for (name, value, ok, rule) in checks {
            if !ok || !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name}={value} {rule}")));
            }
        }
        Ok(())
    }
}
