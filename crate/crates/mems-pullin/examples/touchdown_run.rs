//! A finite-time touchdown trajectory with the event located by bisection.
//!
//! Integrates the origin-started orbit on the touchdown side of the
//! threshold and reports the located touchdown time together with the
//! closing gap `1 + x` over the final samples.

use mems_pullin::dynamics::{self, IntegrationOptions};
use mems_pullin::{Outcome, Params, PhaseState};

fn main() -> mems_pullin::Result<()> {
    let params = Params::new(0.14, 0.25)?;
    let opts = IntegrationOptions {
        sample_every: Some(0.25),
        ..IntegrationOptions::default()
    };
    let traj = dynamics::integrate(&params, PhaseState::origin(), &opts);

    println!("lambda = {}, alpha = {}", params.lambda(), params.alpha());
    println!("outcome: {}", traj.outcome);
    println!(
        "steps: {} accepted, {} rejected, min gap 1+x = {:.3e}",
        traj.stats.steps, traj.stats.rejected_steps, traj.stats.min_gap
    );

    println!();
    println!("{:>10}  {:>12}  {:>12}  {:>10}", "t", "x", "y", "gap 1+x");
    let tail = traj.samples.len().saturating_sub(8);
    for s in &traj.samples[tail..] {
        println!(
            "{:>10.4}  {:>12.8}  {:>12.6}  {:>10.3e}",
            s.t(),
            s.x(),
            s.y(),
            1.0 + s.x()
        );
    }

    if let Outcome::Touchdown { t_td } = traj.outcome {
        println!();
        println!("touchdown time t_td = {t_td:.6}");
    }

    // The same parameters through the classifier, which certifies the
    // outcome without storing samples.
    let verdict = dynamics::classify(&params, &IntegrationOptions::default());
    println!("classifier agrees: {verdict}");
    Ok(())
}
