//! Stationary solutions across the static pull-in fold.
//!
//! Sweeps the load parameter through `lambda* = 4/27`, printing both
//! equilibrium branches with their linearization, then shows the fold
//! itself: a degenerate root at the fold and no equilibria beyond it.

use mems_pullin::steady::{self, Equilibria};
use mems_pullin::Params;

fn main() -> mems_pullin::Result<()> {
    let fold = steady::static_pullin();
    println!("static pull-in lambda* = {fold:.12} (= 4/27)");
    println!();
    println!(
        "{:>8}  {:>12} {:>10}  {:>12} {:>10}",
        "lambda", "x1", "type", "x2", "type"
    );

    for k in 1..=9 {
        let lambda = fold * k as f64 / 10.0;
        let params = Params::new(lambda, 0.8)?;
        let Equilibria::Pair { x1, x2 } = steady::equilibria(lambda)? else {
            unreachable!("below the fold there are two roots");
        };
        let s1 = steady::stability(x1, &params)?;
        let s2 = steady::stability(x2, &params)?;
        println!(
            "{lambda:>8.5}  {x1:>12.8} {:>10}  {x2:>12.8} {:>10}",
            s1.label.to_string(),
            s2.label.to_string()
        );
    }

    println!();
    for lambda in [fold - 1e-6, fold, fold + 1e-6] {
        match steady::equilibria(lambda)? {
            Equilibria::Pair { x1, x2 } => {
                println!("lambda = {lambda:.8}: pair, spacing x2 - x1 = {:.3e}", x2 - x1)
            }
            Equilibria::Degenerate { x } => {
                println!("lambda = {lambda:.8}: degenerate root at x = {x:.8}")
            }
            Equilibria::None => println!("lambda = {lambda:.8}: no equilibria (pulled in)"),
        }
    }

    // The saddle-side eigenvalue split that the manifold tracer seeds from.
    let params = Params::new(0.13, 1.0)?;
    let (x1, _) = steady::equilibria(0.13)?.pair().expect("pair below fold");
    let report = steady::stability(x1, &params)?;
    println!();
    println!(
        "saddle at lambda = 0.13, alpha = 1: mu+ = {:.8}, mu- = {:.8}, residual = {:.2e}",
        report.mu_plus.re, report.mu_minus.re, report.residual
    );
    Ok(())
}
