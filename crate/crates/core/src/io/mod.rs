//! Configuration, trial-record CSV and the command pipeline.

pub mod commands;
pub mod config;
pub mod records;

pub use commands::{
    cmd_fit, cmd_momentary, cmd_simulate, cmd_stats, cmd_summarize, cmd_trace, parse_curves, sidecar_path,
    stats_report, Envelope, Meta,
};
pub use config::{Overrides, RunConfig};
pub use records::{read_records, write_records, TrialRecord};
