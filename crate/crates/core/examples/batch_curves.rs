//! Simulate the default design of both scenarios and print group-mean curves.

use deam::experiment::{group_mean, ALL_CHOICES};
use deam::prelude::*;

fn main() -> deam::Result<()> {
    for scenario in [ScenarioKind::LaneChange, ScenarioKind::CarFollow] {
        let batch = build_batch(scenario, &BatchDesign::default_for(scenario), &mut stream(1, 0, tag::DESIGN))?;
        let trials = run_batch(&batch, &ModelParams::published(scenario), &FixationConfig::for_scenario(scenario), 1)?;
        let c = summarize(&trials, &AnalysisOptions::default())?;
        println!("{scenario}: {} trials, timeout rate {:.4}", c.n_trials, c.timeout_rate);
        println!("  P({}) by bias {:?}", scenario.upper_label(), group_mean(&c.choice_prob_by_bias));
        println!("  RT by clarity {:?}", group_mean(&c.rt_by_clarity[ALL_CHOICES]));
        println!("  switches by clarity {:?}", group_mean(&c.switches_by_clarity[ALL_CHOICES]));
        for (bias, cell) in &c.last_fixation_curves {
            println!(
                "  bias {bias:+}: P(upper | last {:?}) vs P(upper | last {:?})",
                cell.p_upper_given_option1, cell.p_upper_given_option2
            );
        }
        for w in &c.warnings {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
