//! The DEAM against its aDDM reduction, and the effect of the option-2 sign.

use deam::experiment::{group_mean, ALL_CHOICES};
use deam::prelude::*;

fn run(label: &str, params: ModelParams) -> deam::Result<()> {
    let s = ScenarioKind::LaneChange;
    let batch = build_batch(s, &BatchDesign::default_for(s), &mut stream(4, 0, tag::DESIGN))?;
    let c = summarize(&run_batch(&batch, &params, &FixationConfig::lane_change(), 4)?, &AnalysisOptions::default())?;
    println!("{label}");
    println!("  P(change) by bias {:?}", group_mean(&c.choice_prob_by_bias));
    println!("  RT by clarity     {:?}", group_mean(&c.rt_by_clarity[ALL_CHOICES]));
    println!("  timeout rate      {:.4}", c.timeout_rate);
    Ok(())
}

fn main() -> deam::Result<()> {
    let deam = ModelParams::lane_change();
    run("DEAM", deam)?;
    run("aDDM (theta 0.3, fixed bounds)", deam.as_addm(0.3))?;
    run("DEAM, literal option-2 sign", deam.with_convention(SignConvention::PaperLiteral))?;
    Ok(())
}
