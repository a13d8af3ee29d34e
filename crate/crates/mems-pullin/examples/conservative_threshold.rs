//! The undamped dynamic pull-in threshold from the energy landmark.
//!
//! With no damping the orbit from rest at the origin conserves
//! `E = y^2/2 + F(x)`, so touchdown is decided by comparing the starting
//! energy `F(0) = -lambda` against the saddle barrier `F(x1)`. The landmark
//! `phi(lambda) = F(x1, lambda) + lambda` changes sign exactly at the
//! threshold, which lands on `1/8`.

use mems_pullin::dynamics::{self, conservative_orbit};
use mems_pullin::model::potential;
use mems_pullin::steady;

fn main() -> mems_pullin::Result<()> {
    println!("{:>10}  {:>15}", "lambda", "phi(lambda)");
    for lambda in [1e-6, 0.05, 0.1, 0.125, 0.13, 4.0 / 27.0] {
        println!("{lambda:>10.6}  {:>15.10}", dynamics::phi(lambda)?);
    }

    let ld = dynamics::lambda_d_conservative();
    println!();
    println!("bisected zero of phi: lambda_d(0) = {ld:.12}");
    println!("deviation from 1/8:   {:+.3e}", ld - 0.125);

    let (x1, x2) = steady::equilibria(ld)?.pair().expect("pair below fold");
    println!("saddle at threshold:  x1 = {x1:.12} (exact value -1/2)");
    println!("well at threshold:    x2 = {x2:.12} (exact value (-3+sqrt(5))/4)");

    // The homoclinic level set E = F(x1) bounds the well; at the threshold
    // it passes through the origin, which is why the resting orbit is
    // marginal there.
    let e0 = potential(x1, ld)?;
    let grid: Vec<f64> = (0..=20).map(|k| x1 + (0.0 - x1) * k as f64 / 20.0).collect();
    let loop_pts = conservative_orbit(ld, e0, &grid);
    println!();
    println!("homoclinic level set through the origin ({} points):", loop_pts.len());
    for (x, y) in loop_pts.iter().step_by(8) {
        println!("  x = {x:>9.6}  y = {y:>9.6}");
    }
    Ok(())
}
