//! Recover lane-change parameters from synthetic curves with the GA.
//!
//! Noise is held at its true value: scaling d, the bound and the noise by the
//! same factor leaves choices and RTs unchanged, so it is not identifiable.

use deam::experiment::TrialBatch;
use deam::fitting::{noise_floor, theta_by_clarity, FitProblem, TargetCurves};
use deam::prelude::*;

fn main() -> deam::Result<()> {
    let s = ScenarioKind::LaneChange;
    let truth = ModelParams::lane_change();
    let fix = FixationConfig::lane_change();
    let design = BatchDesign {
        n_groups: 8,
        size: BatchSize::RepsPerCondition(5),
    };
    let batch: TrialBatch = build_batch(s, &design, &mut stream(10, 0, tag::DESIGN))?;
    let targets = TargetCurves::from_trials(&run_batch(&batch, &truth, &fix, 11)?)?;

    let mut space = SearchSpace::default();
    space.sigma = [truth.sigma, truth.sigma];
    let ga = GaConfig {
        population: 24,
        generations: 20,
        seed: 12,
        ..GaConfig::default()
    };
    let problem = FitProblem {
        targets,
        batch: batch.clone(),
        fix_config: fix,
        template: truth,
        weights: ObjectiveWeights::default(),
    };
    let fit = fit_ga(&problem, &space, &ga)?;
    let floor = noise_floor(&truth, &batch, &fix, &ObjectiveWeights::default(), 10, 13)?;

    let p = fit.best_params;
    println!("         d        m      n      r      B");
    println!("truth {:.5} {:.3} {:.3} {:.3} {:.3}", truth.d, truth.m, truth.n, truth.r, truth.b_start);
    println!("fit   {:.5} {:.3} {:.3} {:.3} {:.3}", p.d, p.m, p.n, p.r, p.b_start);
    println!("theta truth {:?}", theta_by_clarity(&truth, s)?);
    println!("theta fit   {:?}", fit.theta_by_clarity);
    println!(
        "objective {:.4} (fresh mean {:.4}); noise floor mean {:.4} max {:.4}",
        fit.objective, fit.fresh_objective_mean, floor.mean, floor.threshold
    );
    Ok(())
}
