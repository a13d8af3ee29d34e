//! Parallel classification of a `(lambda, alpha)` grid.
//!
//! Every grid point integrates the origin-started orbit until one of the
//! certificates fires: sub-barrier energy inside the well (stable), dwell
//! inside a small saddle ball (critical), or the gap event at the plate
//! (touchdown). Points are independent and run on the rayon pool.

use mems_pullin::dynamics::{self, IntegrationOptions};
use mems_pullin::{Outcome, Params};
use rayon::prelude::*;

fn main() -> mems_pullin::Result<()> {
    let lambdas: Vec<f64> = (0..=10).map(|k| 0.05 + 0.011 * k as f64).collect();
    let alphas = [0.0, 0.25, 0.5, 1.0];

    let verdicts: Vec<Vec<Outcome>> = alphas
        .par_iter()
        .map(|&alpha| {
            lambdas
                .iter()
                .map(|&lambda| {
                    let params = Params::new(lambda, alpha).expect("grid is valid");
                    dynamics::classify(&params, &IntegrationOptions::default())
                })
                .collect()
        })
        .collect();

    println!("legend: s = stable, c = critical saddle, T = touchdown, ? = unresolved");
    println!();
    print!("{:>7}", "alpha");
    for lambda in &lambdas {
        print!(" {lambda:>6.3}");
    }
    println!();
    for (row, alpha) in verdicts.iter().zip(alphas) {
        print!("{alpha:>7.2}");
        for outcome in row {
            let mark = match outcome {
                Outcome::ConvergedStable { .. } => 's',
                Outcome::ConvergedSaddle { .. } => 'c',
                Outcome::Touchdown { .. } => 'T',
                Outcome::BudgetExhausted { .. } => '?',
            };
            print!(" {mark:>6}");
        }
        println!();
    }

    println!();
    println!(
        "threshold landmarks: lambda_d(0) = 1/8 = 0.125, static fold 4/27 = {:.5}",
        4.0 / 27.0
    );
    Ok(())
}
