//! Slope t-tests, Kruskal-Wallis and MSE on simulated curves.

use deam::io::stats_report;
use deam::prelude::*;
use deam::stats::{kruskal_wallis, linear_regression, mse};

fn main() -> deam::Result<()> {
    let r = linear_regression(&[-2.0, -1.0, 0.0, 1.0, 2.0], &[0.1, 0.2, 0.5, 0.8, 0.9])?;
    println!("toy regression slope {:.3} intercept {:.3}", r.slope, r.intercept);
    let kw = kruskal_wallis(&[vec![3.0, 4.0, 5.0], vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0]])?;
    println!("toy Kruskal-Wallis H={:.3} p={:.4}", kw.h, kw.p);
    println!("toy MSE {:.4}", mse(&[0.1, 0.5], &[0.2, 0.4])?);

    let s = ScenarioKind::LaneChange;
    let batch = build_batch(s, &BatchDesign::default_for(s), &mut stream(2, 0, tag::DESIGN))?;
    let fix = FixationConfig::lane_change();
    let a = summarize(&run_batch(&batch, &ModelParams::lane_change(), &fix, 2)?, &AnalysisOptions::default())?;
    let b = summarize(&run_batch(&batch, &ModelParams::lane_change(), &fix, 3)?, &AnalysisOptions::default())?;
    let report = stats_report(&a, Some(&b))?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}
