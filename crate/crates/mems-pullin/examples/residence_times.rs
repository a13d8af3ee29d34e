//! Three timescales of a near-threshold touchdown.
//!
//! Just above the dynamic pull-in load the orbit falls quickly toward the
//! saddle, lingers beside it in a metastable crawl, then collapses onto the
//! plate. Shrinking the excess load stretches the middle phase without
//! much effect on the other two.

use mems_pullin::dynamics;
use mems_pullin::pullin::{self, Method};
use mems_pullin::Params;

fn main() -> mems_pullin::Result<()> {
    let alpha = 0.25;
    let base = pullin::lambda_d_star_with(alpha, 1e-9, Method::ManifoldCrossing)?;
    println!(
        "alpha = {alpha}: lambda_d* = {:.10} (half width {:.1e})",
        base.lambda_d, base.half_width
    );

    println!();
    println!(
        "{:>8}  {:>10}  {:>10}  {:>10}  {:>10}",
        "excess", "t_approach", "t_dwell", "t_collapse", "t_total"
    );
    for delta in [1e-2, 1e-3, 1e-4] {
        let params = Params::new(base.lambda_d + delta, alpha)?;
        let prof = dynamics::residence_profile(&params, 0.15)?;
        println!(
            "{delta:>8.0e}  {:>10.3}  {:>10.3}  {:>10.3}  {:>10.3}",
            prof.t_approach, prof.t_dwell, prof.t_collapse, prof.t_touchdown
        );
    }

    println!();
    println!("the approach and collapse legs barely move; the dwell grows");
    println!("like the logarithm of the inverse excess load");
    Ok(())
}
