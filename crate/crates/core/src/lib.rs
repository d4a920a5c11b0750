//! Attention-modulated evidence accumulation for driver decisions.
//!
//! The crate simulates the dynamic evidence accumulation model (DEAM) and its
//! attentional drift-diffusion (aDDM) baseline for two driving scenarios:
//! latent lane changes (rear vehicle vs. front vehicle) and car following
//! (front vehicle vs. surroundings). Around the single-trial simulator it
//! provides trial-batch designs, summary curves, the statistical tests used to
//! read them, and a genetic-algorithm fitter.
//!
//! ```no_run
//! use deam::prelude::*;
//!
//! let scenario = ScenarioKind::LaneChange;
//! let batch = build_batch(scenario, &BatchDesign::default_for(scenario), &mut stream(42, 0, tag::DESIGN)).unwrap();
//! let trials = run_batch(&batch, &ModelParams::lane_change(), &FixationConfig::lane_change(), 42).unwrap();
//! let curves = summarize(&trials, &AnalysisOptions::default()).unwrap();
//! println!("{:?}", curves.choice_prob_by_bias);
//! ```

pub mod accumulator;
pub mod attention;
pub mod error;
pub mod experiment;
pub mod fitting;
pub mod io;
pub mod params;
pub mod scenario;
pub mod seed;
pub mod stats;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::accumulator::{
        bound_lower, bound_upper, rdv_step, sample_momentary_evidence, simulate_trial, Choice, MomentaryParams,
        MomentarySample, TrialOutcome,
    };
    pub use crate::attention::{fixation_at, generate_schedule, theta, FixationConfig, FixationSchedule, FixationTarget};
    pub use crate::error::{Error, Result};
    pub use crate::experiment::{
        build_batch, run_batch, summarize, AnalysisOptions, BatchDesign, BatchSize, Observation, SimulatedTrial,
        SummaryCurves, TrialBatch,
    };
    pub use crate::fitting::{fit_ga, objective, FitResult, GaConfig, ObjectiveWeights, SearchSpace};
    pub use crate::params::{ModelParams, SignConvention};
    pub use crate::scenario::{evidence_bias, evidence_clarity, make_condition, ScenarioKind, TrialCondition};
    pub use crate::seed::{stream, tag};
}
