//! Plot-ready phase-plane data for one parameter point.
//!
//! Collects the ingredients of the classical basin picture: both
//! equilibria, the traced stable-manifold branch of the saddle in original
//! coordinates, the velocity nullcline, and a fan of origin-adjacent
//! orbits. Output is one CSV block per series on stdout, suitable for any
//! plotting tool.

use mems_pullin::dynamics::{self, IntegrationOptions};
use mems_pullin::manifold::{self, default_u_max};
use mems_pullin::model::force;
use mems_pullin::steady;
use mems_pullin::{Params, PhaseState};

fn main() -> mems_pullin::Result<()> {
    let params = Params::new(0.13, 0.5)?;
    let (x1, x2) = steady::equilibria(params.lambda())?.pair().expect("below fold");

    println!("# series: equilibria");
    println!("x,y");
    println!("{x1},0.0");
    println!("{x2},0.0");

    let trace = manifold::trace_stable_manifold(&params, default_u_max(params.lambda())?)?;
    println!("# series: stable manifold (original coordinates)");
    println!("x,y");
    for (x, y) in trace.original_coords().step_by(16) {
        println!("{x},{y}");
    }

    println!("# series: nullcline y = -f(x)/alpha");
    println!("x,y");
    for k in 0..=60 {
        let x = -0.9 + 1.2 * k as f64 / 60.0;
        println!("{x},{}", -force(x, params.lambda())? / params.alpha());
    }

    let opts = IntegrationOptions {
        t_max: 60.0,
        sample_every: Some(0.05),
        ..IntegrationOptions::default()
    };
    for (i, x0) in [0.0, 0.25, 0.45].into_iter().enumerate() {
        let traj = dynamics::integrate(&params, PhaseState::new(0.0, x0, 0.0)?, &opts);
        println!("# series: orbit {i} from ({x0}, 0), outcome {}", traj.outcome);
        println!("x,y");
        for s in traj.samples.iter().step_by(10) {
            println!("{},{}", s.x(), s.y());
        }
    }
    Ok(())
}
