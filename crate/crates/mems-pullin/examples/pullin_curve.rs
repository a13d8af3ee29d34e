//! The dynamic pull-in curve `lambda_d*(alpha)` and its saturation.
//!
//! Each grid point bisects the load between certified-stable and
//! certified-touchdown sides. The curve rises from the undamped value `1/8`
//! toward the static fold `4/27`, and it reaches the fold at a finite
//! damping level: above roughly `alpha = 0.79` every load below the fold
//! settles into the well, so there is no touchdown side left to bracket and
//! the sweep reports the point as failed rather than inventing a value.

use mems_pullin::pullin::{self, Method};

fn main() -> mems_pullin::Result<()> {
    let grid: Vec<f64> = (0..=7).map(|k| 0.1 * k as f64).collect();
    let curve = pullin::sweep_curve_with(&grid, 1e-8, Method::ManifoldCrossing)?;

    println!("method: {}, tolerance {:.0e}", curve.method, curve.tol);
    println!();
    println!("{:>7}  {:>14}  {:>10}", "alpha", "lambda_d", "half width");
    for p in &curve.points {
        println!("{:>7.2}  {:>14.10}  {:>10.2e}", p.alpha, p.lambda_d, p.half_width);
    }
    println!();
    println!(
        "fold 4/27 = {:.10}; gap at alpha = 0.7: {:.2e}",
        4.0 / 27.0,
        4.0 / 27.0 - curve.points.last().expect("nonempty").lambda_d
    );

    // Past the saturation level the bracket has no touchdown endpoint.
    match pullin::lambda_d_star_with(1.0, 1e-8, Method::ManifoldCrossing) {
        Err(e) => println!("alpha = 1.0: {e}"),
        Ok(p) => println!("alpha = 1.0: lambda_d = {} (unexpected)", p.lambda_d),
    }
    Ok(())
}
