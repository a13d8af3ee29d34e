//! The saddle's stable manifold as a graph and its axis crossing.
//!
//! In shifted coordinates `u = x - x1` the relevant branch of the stable
//! manifold is the graph `v = Phi(u)` with `Phi(0) = 0` and tangent slope
//! `mu+`. Where `Phi` returns to zero the branch crosses the horizontal
//! axis at `x_bar = u + x1`; the sign of `x_bar` decides whether the rest
//! state at the origin sits inside the basin of the stable equilibrium.
//! Damping pushes the crossing to the right, which is the mechanism behind
//! the damping threshold `alpha*(lambda)`.

use mems_pullin::manifold::{self, default_u_max};
use mems_pullin::Params;

fn main() -> mems_pullin::Result<()> {
    let lambda = 0.14;
    let u_max = default_u_max(lambda)?;

    println!("lambda = {lambda}, trace horizon u_max = {u_max:.4}");
    println!();
    println!(
        "{:>7}  {:>10}  {:>12}  {:>12}  side",
        "alpha", "mu+", "u_crossing", "x_bar"
    );
    // The measured threshold at this load is near alpha = 0.3384: the
    // crossing x_bar passes through zero there.
    for alpha in [0.0, 0.2, 0.3383946, 0.5, 2.0] {
        let trace = manifold::trace_stable_manifold(&Params::new(lambda, alpha)?, u_max)?;
        match (trace.u_crossing(), trace.x_bar()) {
            (Some(u), Some(xb)) => {
                let side = if xb < 0.0 { "touchdown" } else { "stable" };
                println!(
                    "{alpha:>7.4}  {:>10.6}  {u:>12.8}  {xb:>+12.8}  {side}",
                    trace.mu_plus()
                );
            }
            _ => println!(
                "{alpha:>7.4}  {:>10.6}  {:>12}  {:>12}  stable (no return)",
                trace.mu_plus(),
                "-",
                "-"
            ),
        }
    }

    println!();
    let ok = manifold::monotonicity_check(lambda, &[0.0, 0.5, 1.0, 2.0])?;
    println!("Phi strictly ordered in alpha on the common domain: {ok}");
    let bound = manifold::lemma1_bound_check(&Params::new(lambda, 0.5)?)?;
    println!("lower bound Phi(u) >= alpha u on the inter-equilibria span: {bound}");
    Ok(())
}
