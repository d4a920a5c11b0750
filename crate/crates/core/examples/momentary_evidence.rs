//! Attended and unattended momentary evidence and their sample moments.

use deam::prelude::*;

fn main() -> deam::Result<()> {
    let condition = make_condition(ScenarioKind::LaneChange, 2, 2)?;
    let params = MomentaryParams {
        z_bar: 1.0,
        sigma_z: 1.0,
        theta: 0.3,
        dt: 0.01,
    };
    let mut rng = stream(3, 0, tag::MOMENTARY);
    let n = 100_000;
    let (mut sa, mut su, mut sa2, mut su2) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let s = sample_momentary_evidence(&condition, FixationTarget::Fv, &params, i as f64 * params.dt, &mut rng)?;
        sa += s.attended_evidence;
        su += s.unattended_evidence;
        sa2 += s.attended_evidence.powi(2);
        su2 += s.unattended_evidence.powi(2);
    }
    let n = n as f64;
    let var = |s: f64, s2: f64| s2 / n - (s / n).powi(2);
    println!("attended   mean {:.6} (expect {:.6}) var {:.3e}", sa / n, params.z_bar * params.dt, var(sa, sa2));
    println!(
        "unattended mean {:.6} (expect {:.6}) var {:.3e}",
        su / n,
        params.theta * params.z_bar * params.dt,
        var(su, su2)
    );
    Ok(())
}
