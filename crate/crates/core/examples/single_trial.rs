//! One lane-change trial with its RDV trace and fixation schedule.

use deam::prelude::*;

fn main() -> deam::Result<()> {
    let scenario = ScenarioKind::LaneChange;
    let params = ModelParams::lane_change();
    let condition = make_condition(scenario, 3, 1)?;
    let schedule = generate_schedule(scenario, &FixationConfig::lane_change(), params.t_max, &mut stream(7, 0, tag::SCHEDULE))?;
    let out = simulate_trial(&condition, &params, &schedule, &mut stream(7, 0, tag::NOISE), true)?;

    println!(
        "z1={} z2={} bias={} clarity={} theta={:.3}",
        condition.z1(),
        condition.z2(),
        evidence_bias(&condition),
        evidence_clarity(&condition),
        theta(condition.clarity(), params.m, params.n)?
    );
    println!("choice {:?} at {:.3} s after {} switches", out.choice, out.rt, out.n_switches);
    for (target, dur) in &out.fixations {
        println!("  {target} for {dur:.3} s");
    }
    let trace = out.trace.unwrap_or_default();
    for p in trace.iter().step_by(100) {
        println!("  t={:.2} v={:+.4} bound={:.4} {}", p.t, p.v, bound_upper(p.t, params.r, params.b_start), p.target);
    }
    Ok(())
}
